//! The column construction: twelve columns of embeddings, each extended by
//! applying the next entry of the column to its right to entries of a source
//! column `HAT[n]`, plus a singleton column 12 holding `k''`.
//!
//! Labels (the critical-sequence members `a(n, i)`) live in a small e-graph:
//! every label is either one of the named ordinals or `e(x)` for an embedding
//! `e` and a label `x`. Facts come from the critical sequences of the seeds,
//! from left distributivity (`e(a)(e(x)) = e(a(x))`), from "ordinals below
//! the critical point are fixed", and from explicitly enabled side
//! conditions. Block starts and ends are detected from these facts alone, so
//! the count audit against `Ct_n` is a genuine cross-check.
//!
//! Caps bound how many entries a column requests for itself and how many
//! entries of the next column it consumes on its own behalf. Entries that a
//! higher column needs as *sources* are generated regardless of caps, up to
//! a global entry budget.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::growth::{Growth, Value};
use crate::laver::{CritIndex, LaverError, TableSet};
use crate::term::{render_compact, Term};

pub const COLUMNS: usize = 12;
pub const HAT: [usize; COLUMNS] = [0, 1, 1, 3, 1, 3, 6, 1, 8, 1, 3, 6];
pub const DEFAULT_MAX_ENTRIES: usize = 200_000;

pub type EmbId = usize;
pub type LabelId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("column {column} needs side condition {condition}")]
    MissingSideCondition {
        column: usize,
        condition: SideCondition,
    },
    #[error("entry budget of {limit} exhausted")]
    Budget { limit: usize },
    #[error("no column {0}")]
    BadColumn(usize),
    #[error("cyclic demand on column {0}")]
    Cycle(usize),
}

/// Assumptions the construction uses but does not derive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SideCondition {
    /// `k(j)(κ1) = κ3`, i.e. `ẽ5_0(κ1) = κ3`.
    KjKappa1,
    /// `ẽ10_0(μ) = ξ`.
    E10MuXi,
    /// `ẽ11_0(j)(μ) = ξ`.
    E11jMuXi,
}

impl SideCondition {
    pub const ALL: [SideCondition; 3] = [Self::KjKappa1, Self::E10MuXi, Self::E11jMuXi];
}

impl fmt::Display for SideCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::KjKappa1 => "k(j)(kappa_1) = kappa_3",
            Self::E10MuXi => "e10_0(mu) = xi",
            Self::E11jMuXi => "e11_0(j)(mu) = xi",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Named {
    Kappa0,
    Kappa1,
    Kappa2,
    Kappa3,
    Mu,
    Nu,
    Xi,
}

impl Named {
    pub const ALL: [Named; 7] = [
        Self::Kappa0,
        Self::Kappa1,
        Self::Kappa2,
        Self::Kappa3,
        Self::Mu,
        Self::Nu,
        Self::Xi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Kappa0 => "kappa_0",
            Self::Kappa1 => "kappa_1",
            Self::Kappa2 => "kappa_2",
            Self::Kappa3 => "kappa_3",
            Self::Mu => "mu",
            Self::Nu => "nu",
            Self::Xi => "xi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    J,
    Ap(EmbId, EmbId),
}

#[derive(Debug, Default)]
struct Dag {
    nodes: Vec<Node>,
    index: HashMap<Node, EmbId>,
}

impl Dag {
    fn intern(&mut self, n: Node) -> EmbId {
        if let Some(&id) = self.index.get(&n) {
            return id;
        }
        self.nodes.push(n);
        self.index.insert(n, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn ap(&mut self, a: EmbId, b: EmbId) -> EmbId {
        self.intern(Node::Ap(a, b))
    }

    fn j_sub(&mut self, n: u64) -> EmbId {
        let j = self.intern(Node::J);
        (1..n).fold(j, |acc, _| self.ap(acc, j))
    }

    fn term(&self, id: EmbId, cache: &mut HashMap<EmbId, Term>) -> Term {
        if let Some(t) = cache.get(&id) {
            return t.clone();
        }
        let t = match self.nodes[id] {
            Node::J => Term::Generator,
            Node::Ap(a, b) => Term::apply(self.term(a, cache), self.term(b, cache)),
        };
        cache.insert(id, t.clone());
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum LNode {
    Named(Named),
    App(EmbId, LabelId),
}

#[derive(Debug, Default)]
struct Store {
    nodes: Vec<LNode>,
    witness: Vec<EmbId>,
    index: HashMap<LNode, LabelId>,
    parent: Vec<LabelId>,
    named_at: Vec<Option<Named>>,
    /// `App` nodes whose argument lies in the class, keyed by root.
    uses: Vec<Vec<LabelId>>,
    /// Congruence signatures `(e, root of x)`.
    sig: HashMap<(EmbId, LabelId), LabelId>,
    pending: Vec<LabelId>,
    conflicts: Vec<String>,
}

impl Store {
    fn find(&self, mut x: LabelId) -> LabelId {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn same(&self, a: LabelId, b: LabelId) -> bool {
        self.find(a) == self.find(b)
    }

    fn push(&mut self, node: LNode, witness: EmbId) -> LabelId {
        let id = self.nodes.len();
        self.nodes.push(node);
        self.witness.push(witness);
        self.index.insert(node, id);
        self.parent.push(id);
        self.named_at.push(match node {
            LNode::Named(x) => Some(x),
            LNode::App(..) => None,
        });
        self.uses.push(Vec::new());
        if let LNode::App(_, x) = node {
            let r = self.find(x);
            self.uses[r].push(id);
            self.pending.push(id);
        }
        id
    }

    fn union(&mut self, a: LabelId, b: LabelId) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (keep, drop) = if self.uses[ra].len() >= self.uses[rb].len() {
            (ra, rb)
        } else {
            (rb, ra)
        };
        match (self.named_at[keep], self.named_at[drop]) {
            (Some(x), Some(y)) if x != y => self
                .conflicts
                .push(format!("{} identified with {}", x.name(), y.name())),
            (None, Some(y)) => self.named_at[keep] = Some(y),
            _ => {}
        }
        self.parent[drop] = keep;
        let moved = std::mem::take(&mut self.uses[drop]);
        self.pending.extend(moved.iter().copied());
        self.uses[keep].extend(moved);
        true
    }

    fn named_of(&self, x: LabelId) -> Option<Named> {
        self.named_at[self.find(x)]
    }

    /// Congruence: `e(x)` and `e(y)` merge once `x` and `y` do.
    fn rebuild(&mut self) {
        while let Some(id) = self.pending.pop() {
            let LNode::App(e, x) = self.nodes[id] else {
                continue;
            };
            let key = (e, self.find(x));
            match self.sig.get(&key) {
                Some(&other) if !self.same(other, id) => {
                    self.union(other, id);
                }
                Some(_) => {}
                None => {
                    self.sig.insert(key, id);
                }
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub enum Origin {
    Seed(&'static str),
    /// `outer(source)` with `outer = ẽ(outer.0)_(outer.1)` and
    /// `source = ẽ(source.0)_(source.1)`.
    Derived {
        outer: (usize, usize),
        source: (usize, usize),
    },
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub emb: EmbId,
    /// Leading members of the critical sequence.
    pub seq: Vec<LabelId>,
    pub origin: Origin,
}

/// One pass of the recipe: the entry `consumed` of the column to the right
/// applied to source entries from `source_start` on.
#[derive(Debug, Clone, Serialize)]
pub struct Block {
    pub consumed: usize,
    pub source_start: usize,
    pub first_entry: usize,
    pub len: usize,
    pub complete: bool,
}

#[derive(Debug, Clone)]
pub struct Column {
    pub n: usize,
    pub entries: Vec<Entry>,
    /// `a(n, 0..=len)`.
    pub labels: Vec<LabelId>,
    pub seeds: usize,
    pub blocks: Vec<Block>,
    pub stall: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryCheck {
    pub kind: &'static str,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridConfig {
    pub caps: [usize; COLUMNS],
    pub side_conditions: BTreeSet<SideCondition>,
    pub max_entries: usize,
}

impl GridConfig {
    pub fn uniform(cap: usize) -> Self {
        Self::with_caps([cap; COLUMNS])
    }

    pub fn with_caps(caps: [usize; COLUMNS]) -> Self {
        GridConfig {
            caps,
            side_conditions: SideCondition::ALL.into_iter().collect(),
            max_entries: DEFAULT_MAX_ENTRIES,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Open {
    m: usize,
    outer: EmbId,
    next_src: usize,
    target: LabelId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extension {
    /// A block ran to completion, adding this many entries.
    Appended(usize),
    /// The column hit its cap mid-block.
    CapReached { appended: usize },
    /// Nothing left to consume within the caps.
    Exhausted,
}

#[derive(Debug)]
pub struct GridState {
    cfg: GridConfig,
    dag: Dag,
    store: Store,
    named: [LabelId; 7],
    columns: Vec<Column>,
    open: [Option<Open>; COLUMNS],
    busy: [bool; COLUMNS],
    total: usize,
    known: Vec<(EmbId, Vec<LabelId>)>,
    fixed: HashSet<(EmbId, Named)>,
    checks: Vec<BoundaryCheck>,
    kpp: EmbId,
    emb_names: HashMap<EmbId, String>,
}

fn start_index(n: usize, m: usize) -> Option<usize> {
    match n {
        4 => Some(usize::from(m > 0)),
        7 => Some(8),
        9 if m == 0 => Some(8),
        9 => None,
        _ => Some(0),
    }
}

fn required_condition(n: usize, m: usize) -> Option<SideCondition> {
    match (n, m) {
        (4, 0) => Some(SideCondition::KjKappa1),
        (9, 0) => Some(SideCondition::E10MuXi),
        (10, 0) => Some(SideCondition::E11jMuXi),
        _ => None,
    }
}

/// Named prefix of each column's critical sequence, before `a(n,m) ↦ a(n,m+1)`.
pub fn pattern_prefix(n: usize) -> &'static [Named] {
    use Named::*;
    match n {
        0 => &[],
        1 => &[Kappa0],
        2 => &[Kappa1],
        3 => &[Kappa0, Kappa1],
        4 => &[Kappa2],
        5 => &[Kappa0, Kappa2],
        6 => &[Kappa1, Kappa2],
        7 => &[Mu],
        8 => &[Kappa0, Mu],
        9 => &[Nu],
        10 => &[Kappa0, Nu],
        _ => &[Kappa1, Nu],
    }
}

pub fn init_grid(cfg: GridConfig) -> Result<GridState, GridError> {
    let mut dag = Dag::default();
    let j = dag.j_sub(1);
    let j7 = dag.j_sub(7);
    let j9 = dag.j_sub(9);
    let j10 = dag.j_sub(10);
    let j11 = dag.j_sub(11);
    let j14 = dag.j_sub(14);
    let k = j10;
    let kp = dag.ap(j10, j11);
    let kpp = dag.ap(j9, j14);

    // witnesses: terms whose critical point is the named ordinal
    let w1 = dag.ap(j, j);
    let w2 = dag.ap(j, w1);
    let w3 = dag.ap(j, w2);
    let wmu = dag.ap(j7, w2);
    let wnu = dag.ap(j9, w3);
    let wxi0 = dag.ap(j10, w3);
    let wxi = dag.ap(j10, wxi0);
    let witnesses = [j, w1, w2, w3, wmu, wnu, wxi];

    let mut store = Store::default();
    let mut named = [0; 7];
    for (slot, (nm, w)) in named.iter_mut().zip(Named::ALL.into_iter().zip(witnesses)) {
        *slot = store.push(LNode::Named(nm), w);
    }

    let mut emb_names = HashMap::new();
    for (id, name) in [(j, "j"), (k, "k"), (kp, "k'"), (kpp, "k''")] {
        emb_names.insert(id, name.to_string());
    }

    let columns = (0..COLUMNS)
        .map(|n| Column {
            n,
            entries: Vec::new(),
            labels: Vec::new(),
            seeds: 0,
            blocks: Vec::new(),
            stall: None,
        })
        .collect();
    let mut st = GridState {
        cfg,
        dag,
        store,
        named,
        columns,
        open: [None; COLUMNS],
        busy: [false; COLUMNS],
        total: 0,
        known: Vec::new(),
        fixed: HashSet::new(),
        checks: Vec::new(),
        kpp,
        emb_names,
    };
    use Named::*;
    let nl = |x: Named| named[x as usize];
    let j_seq = vec![nl(Kappa0), nl(Kappa1), nl(Kappa2), nl(Kappa3)];
    let k_seq = vec![nl(Kappa1), nl(Kappa2), nl(Mu), nl(Nu)];
    let kp_seq = vec![nl(Kappa0), nl(Mu), nl(Nu), nl(Xi)];
    st.register(j, &j_seq);
    st.register(k, &k_seq);
    st.register(kp, &kp_seq);
    st.register(kpp, &[nl(Kappa2), nl(Nu)]);

    let seeded: [(usize, EmbId, &Vec<LabelId>, &'static str, [Named; 2]); 5] = [
        (0, j, &j_seq, "j", [Kappa0, Kappa1]),
        (1, j, &j_seq, "j", [Kappa1, Kappa2]),
        (3, j, &j_seq, "j", [Kappa2, Kappa3]),
        (6, k, &k_seq, "k", [Mu, Nu]),
        (8, kp, &kp_seq, "k'", [Nu, Xi]),
    ];
    for (n, emb, seq, name, [a0, a1]) in seeded {
        let col = &mut st.columns[n];
        col.entries.push(Entry {
            emb,
            seq: seq.clone(),
            origin: Origin::Seed(name),
        });
        col.labels = vec![nl(a0), nl(a1)];
        col.seeds = 1;
        st.total += 1;
    }
    for (n, a0) in [(2, Kappa2), (4, Kappa3), (5, Mu), (7, Nu), (9, Xi)] {
        st.columns[n].labels = vec![nl(a0)];
    }
    let kpp_k = st.dag.ap(kpp, k);
    let a10 = st.app(kpp_k, nl(Kappa2));
    st.columns[10].labels = vec![a10];
    let a11 = st.app(kpp, nl(Mu));
    st.columns[11].labels = vec![a11];
    st.columns[11].blocks.push(Block {
        consumed: 0,
        source_start: 0,
        first_entry: 0,
        len: 0,
        complete: false,
    });

    let kj = st.dag.ap(k, j);
    let e10 = st.dag.ap(kpp_k, j);
    for cond in st.cfg.side_conditions.clone() {
        let (e, x, y) = match cond {
            SideCondition::KjKappa1 => (kj, Kappa1, Kappa3),
            SideCondition::E10MuXi | SideCondition::E11jMuXi => (e10, Mu, Xi),
        };
        let lhs = st.app(e, nl(x));
        st.store.union(lhs, nl(y));
    }
    st.close();

    for n in [0, 1, 3, 6, 8] {
        let a = st.columns[n].labels[1];
        let b = st.columns[n + 1].labels[0];
        st.checks.push(BoundaryCheck {
            kind: "seed-chain",
            lhs: format!("a({n},1)"),
            rhs: format!("a({},0)", n + 1),
            holds: st.store.same(a, b),
        });
    }
    Ok(st)
}

pub fn run_grid(cfg: GridConfig) -> Result<GridState, GridError> {
    let caps = cfg.caps;
    let mut st = init_grid(cfg)?;
    for (n, &cap) in caps.iter().enumerate() {
        if cap > 0 {
            st.ensure(n, cap - 1, false)?;
        }
    }
    Ok(st)
}

impl GridState {
    pub fn config(&self) -> &GridConfig {
        &self.cfg
    }

    pub fn column(&self, n: usize) -> &Column {
        &self.columns[n]
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn len(&self, n: usize) -> usize {
        self.columns[n].entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn total_entries(&self) -> usize {
        self.total
    }

    pub fn boundary_checks(&self) -> &[BoundaryCheck] {
        &self.checks
    }

    pub fn named_label(&self, x: Named) -> LabelId {
        self.named[x as usize]
    }

    pub fn label(&self, n: usize, i: usize) -> Option<LabelId> {
        self.columns.get(n)?.labels.get(i).copied()
    }

    pub fn same_label(&self, a: LabelId, b: LabelId) -> bool {
        self.store.same(a, b)
    }

    pub fn label_is(&self, n: usize, i: usize, x: Named) -> bool {
        self.label(n, i)
            .is_some_and(|l| self.store.same(l, self.named_label(x)))
    }

    /// Label `e(x)` if it was ever built.
    pub fn lookup_app(&self, e: EmbId, x: LabelId) -> Option<LabelId> {
        self.store.index.get(&LNode::App(e, x)).copied()
    }

    pub fn label_conflicts(&self) -> &[String] {
        &self.store.conflicts
    }

    pub fn emb_term(&self, e: EmbId) -> Term {
        self.dag.term(e, &mut HashMap::new())
    }

    pub fn kpp(&self) -> EmbId {
        self.kpp
    }

    pub fn emb_name(&self, e: EmbId) -> String {
        if let Some(s) = self.emb_names.get(&e) {
            return s.clone();
        }
        match self.dag.nodes[e] {
            Node::J => "j".into(),
            Node::Ap(a, b) => format!("{}({})", self.emb_name(a), self.emb_name(b)),
        }
    }

    pub fn label_expr(&self, l: LabelId) -> String {
        match self.store.nodes[l] {
            LNode::Named(x) => x.name().into(),
            LNode::App(e, x) => format!("{}({})", self.emb_name(e), self.label_expr(x)),
        }
    }

    fn app(&mut self, e: EmbId, x: LabelId) -> LabelId {
        let key = LNode::App(e, x);
        if let Some(&id) = self.store.index.get(&key) {
            return id;
        }
        let w = self.dag.ap(e, self.store.witness[x]);
        self.store.push(key, w)
    }

    /// Records `e(seq[t]) = seq[t+1]`.
    fn register(&mut self, e: EmbId, seq: &[LabelId]) {
        for w in seq.windows(2) {
            let l = self.app(e, w[0]);
            self.store.union(l, w[1]);
        }
        self.known.push((e, seq.to_vec()));
    }

    /// Congruence plus "below the critical point nothing moves", to a fixpoint.
    fn close(&mut self) {
        loop {
            self.store.rebuild();
            let mut todo = Vec::new();
            for (e, seq) in &self.known {
                if let Some(c) = self.store.named_of(seq[0]) {
                    for x in Named::ALL.into_iter().filter(|&x| x < c) {
                        if self.fixed.insert((*e, x)) {
                            todo.push((*e, x));
                        }
                    }
                }
            }
            if todo.is_empty() {
                break;
            }
            for (e, x) in todo {
                let nx = self.named[x as usize];
                let l = self.app(e, nx);
                self.store.union(l, nx);
            }
        }
    }

    fn ensure(&mut self, n: usize, k: usize, forced: bool) -> Result<bool, GridError> {
        while self.columns[n].entries.len() <= k {
            if !self.step(n, forced)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn step(&mut self, n: usize, forced: bool) -> Result<bool, GridError> {
        if self.busy[n] {
            return Err(GridError::Cycle(n));
        }
        if self.total >= self.cfg.max_entries {
            return Err(GridError::Budget {
                limit: self.cfg.max_entries,
            });
        }
        self.busy[n] = true;
        let r = if n == 11 {
            self.step_top()
        } else {
            self.step_column(n, forced)
        };
        self.busy[n] = false;
        r
    }

    fn step_column(&mut self, n: usize, forced: bool) -> Result<bool, GridError> {
        if self.open[n].is_none() && !self.open_block(n, forced)? {
            return Ok(false);
        }
        self.advance(n)
    }

    fn open_block(&mut self, n: usize, forced: bool) -> Result<bool, GridError> {
        if self.columns[n].stall.is_some() {
            return Ok(false);
        }
        let m = self.columns[n].blocks.len();
        if !forced && m >= self.cfg.caps[n + 1] {
            return Ok(false);
        }
        if !self.ensure(n + 1, m, forced)? {
            return Ok(false);
        }
        if let Some(cond) = required_condition(n, m) {
            if !self.cfg.side_conditions.contains(&cond) {
                return Err(GridError::MissingSideCondition {
                    column: n,
                    condition: cond,
                });
            }
        }
        let Some(s) = start_index(n, m) else {
            self.columns[n].stall = Some(format!(
                "block {m} starts past the first Ctfunc[1,6](1) entries of column 1"
            ));
            return Ok(false);
        };
        let h = HAT[n];
        if s > 0 && !self.ensure(h, s - 1, true)? {
            return Ok(false);
        }
        let outer = self.columns[n + 1].entries[m].emb;
        let c = self.columns[n].entries.len();
        let start = self.app(outer, self.columns[h].labels[s]);
        self.close();
        self.checks.push(BoundaryCheck {
            kind: "block-start",
            lhs: format!("e({},{m})(a({h},{s}))", n + 1),
            rhs: format!("a({n},{c})"),
            holds: self.store.same(start, self.columns[n].labels[c]),
        });
        self.columns[n].blocks.push(Block {
            consumed: m,
            source_start: s,
            first_entry: c,
            len: 0,
            complete: false,
        });
        self.open[n] = Some(Open {
            m,
            outer,
            next_src: s,
            target: self.columns[n + 1].labels[m],
        });
        Ok(true)
    }

    fn advance(&mut self, n: usize) -> Result<bool, GridError> {
        let Some(open) = self.open[n] else {
            return Ok(false);
        };
        let h = HAT[n];
        let i = open.next_src;
        if !self.ensure(h, i, true)? {
            self.columns[n].stall = Some(format!("column {h} cannot supply entry {i}"));
            return Ok(false);
        }
        let (src_emb, src_seq) = {
            let e = &self.columns[h].entries[i];
            (e.emb, e.seq.clone())
        };
        let src_next = self.columns[h].labels[i + 1];
        let (label, idx) = self.push_entry(
            n,
            open.outer,
            src_emb,
            &src_seq,
            src_next,
            Origin::Derived {
                outer: (n + 1, open.m),
                source: (h, i),
            },
        );
        let block = self.columns[n].blocks.last_mut().expect("open block");
        block.len += 1;
        if self.store.same(src_next, open.target) {
            block.complete = true;
            self.open[n] = None;
            let next = self.columns[n + 1].labels[open.m + 1];
            self.checks.push(BoundaryCheck {
                kind: "block-end",
                lhs: format!("a({n},{})", idx + 1),
                rhs: format!("a({},{})", n + 1, open.m + 1),
                holds: self.store.same(label, next),
            });
        } else {
            self.open[n] = Some(Open {
                next_src: i + 1,
                ..open
            });
        }
        Ok(true)
    }

    /// Column 11: `ẽ11_i = k''(ẽ6_i)`, one unbounded block over the singleton.
    fn step_top(&mut self) -> Result<bool, GridError> {
        let i = self.columns[11].entries.len();
        if !self.ensure(6, i, true)? {
            return Ok(false);
        }
        let (src_emb, src_seq) = {
            let e = &self.columns[6].entries[i];
            (e.emb, e.seq.clone())
        };
        let src_next = self.columns[6].labels[i + 1];
        let kpp = self.kpp;
        self.push_entry(
            11,
            kpp,
            src_emb,
            &src_seq,
            src_next,
            Origin::Derived {
                outer: (12, 0),
                source: (6, i),
            },
        );
        self.columns[11].blocks[0].len += 1;
        Ok(true)
    }

    fn push_entry(
        &mut self,
        n: usize,
        outer: EmbId,
        src_emb: EmbId,
        src_seq: &[LabelId],
        src_next: LabelId,
        origin: Origin,
    ) -> (LabelId, usize) {
        let emb = self.dag.ap(outer, src_emb);
        let seq: Vec<LabelId> = src_seq.iter().map(|&x| self.app(outer, x)).collect();
        let label = self.app(outer, src_next);
        self.register(emb, &seq);
        let col = &mut self.columns[n];
        let idx = col.entries.len();
        col.entries.push(Entry { emb, seq, origin });
        col.labels.push(label);
        self.emb_names.entry(emb).or_insert_with(|| format!("e{n}_{idx}"));
        self.total += 1;
        self.close();
        (label, idx)
    }

    /// Runs the next block of column `n` within the caps.
    pub fn extend_column(&mut self, n: usize) -> Result<Extension, GridError> {
        if n >= COLUMNS {
            return Err(GridError::BadColumn(n));
        }
        let before = self.len(n);
        let cap = self.cfg.caps[n];
        loop {
            let appended = self.len(n) - before;
            if self.len(n) >= cap {
                return Ok(if appended > 0 {
                    Extension::CapReached { appended }
                } else {
                    Extension::Exhausted
                });
            }
            if !self.step(n, false)? {
                return Ok(if appended > 0 {
                    Extension::Appended(appended)
                } else {
                    Extension::Exhausted
                });
            }
            if n != 11 && self.open[n].is_none() {
                return Ok(Extension::Appended(self.len(n) - before));
            }
        }
    }

    /// Every `(column, index)` position whose label lies in the class of `l`.
    fn positions(&self) -> HashMap<LabelId, Vec<String>> {
        let mut map: HashMap<LabelId, Vec<String>> = HashMap::new();
        for x in Named::ALL {
            map.entry(self.store.find(self.named_label(x)))
                .or_default()
                .push(x.name().into());
        }
        for col in &self.columns {
            for (i, &l) in col.labels.iter().enumerate() {
                map.entry(self.store.find(l))
                    .or_default()
                    .push(format!("a({},{i})", col.n));
            }
        }
        map
    }

    /// Stable JSON dump: one array per column.
    pub fn dump_json(&self) -> Json {
        let positions = self.positions();
        let mut cache = HashMap::new();
        let cols: Vec<Json> = self
            .columns
            .iter()
            .map(|col| {
                let entries: Vec<Json> = col
                    .entries
                    .iter()
                    .enumerate()
                    .map(|(i, e)| {
                        let l = col.labels[i];
                        let me = format!("a({},{i})", col.n);
                        let ids: Vec<&String> = positions[&self.store.find(l)]
                            .iter()
                            .filter(|p| **p != me)
                            .collect();
                        json!({
                            "index": i,
                            "term": render_compact(&self.dag.term(e.emb, &mut cache)),
                            "crit_label": me,
                            "label_expr": self.label_expr(l),
                            "identities": ids,
                        })
                    })
                    .collect();
                json!({
                    "column": col.n,
                    "hat": HAT[col.n],
                    "entries": entries,
                    "blocks": col.blocks,
                    "stall": col.stall,
                })
            })
            .collect();
        Json::Array(cols)
    }
}

/// Table-backed critical-point indices for DAG nodes.
struct Numerics<'a> {
    tables: &'a TableSet,
    max_n: u32,
    memo: Vec<HashMap<EmbId, u32>>,
}

impl<'a> Numerics<'a> {
    fn new(tables: &'a TableSet, max_n: u32) -> Self {
        Numerics {
            tables,
            max_n,
            memo: vec![HashMap::new(); max_n as usize + 2],
        }
    }

    fn eval(&mut self, dag: &Dag, id: EmbId, lvl: u32) -> Result<u32, LaverError> {
        if let Some(&v) = self.memo[lvl as usize].get(&id) {
            return Ok(v);
        }
        let t = self.tables.table(lvl)?;
        let v = match dag.nodes[id] {
            Node::J => t.eval(&Term::Generator)?,
            Node::Ap(a, b) => {
                let (x, y) = (self.eval(dag, a, lvl)?, self.eval(dag, b, lvl)?);
                t.mult(x, y)?
            }
        };
        self.memo[lvl as usize].insert(id, v);
        Ok(v)
    }

    fn crit(&mut self, dag: &Dag, id: EmbId) -> Result<CritIndex, LaverError> {
        for lvl in 0..=self.max_n + 1 {
            if self.eval(dag, id, lvl)? != 1u32 << lvl {
                return Ok(CritIndex::Exactly(lvl - 1));
            }
        }
        Ok(CritIndex::AtLeast(self.max_n + 1))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ColumnAudit {
    pub n: usize,
    pub len: usize,
    pub complete_blocks: usize,
    pub truncated: bool,
    pub count_law: Option<bool>,
    pub count_detail: Vec<String>,
    pub stall: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridAudit {
    pub columns: Vec<ColumnAudit>,
    pub boundary: Vec<BoundaryCheck>,
    pub pattern_failures: Vec<String>,
    pub ordering_violations: Vec<String>,
    pub conflicts: Vec<String>,
    pub crit_mismatches: Vec<String>,
    pub column1_indices: Vec<CritIndex>,
    pub column1_ok: bool,
}

impl GridAudit {
    pub fn passed(&self) -> bool {
        self.columns.iter().all(|c| c.count_law != Some(false))
            && self.boundary.iter().all(|b| b.holds)
            && self.pattern_failures.is_empty()
            && self.ordering_violations.is_empty()
            && self.conflicts.is_empty()
            && self.crit_mismatches.is_empty()
            && self.column1_ok
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in &self.columns {
            if c.count_law == Some(false) {
                out.push(format!("column {}: {}", c.n, c.count_detail.join("; ")));
            }
        }
        for b in self.boundary.iter().filter(|b| !b.holds) {
            out.push(format!("{}: {} = {}", b.kind, b.lhs, b.rhs));
        }
        out.extend(self.pattern_failures.iter().cloned());
        out.extend(self.ordering_violations.iter().cloned());
        out.extend(self.conflicts.iter().cloned());
        out.extend(self.crit_mismatches.iter().cloned());
        if !self.column1_ok {
            out.push(format!("column 1 indices {:?}", self.column1_indices));
        }
        out
    }
}

/// Identities marked in the figures, checked when both sides exist.
pub const FIGURE_IDENTITIES: &[((usize, usize), (usize, usize))] = &[
    ((1, 1), (2, 0)),
    ((1, 2), (2, 1)),
    ((1, 4), (2, 2)),
    ((2, 0), (3, 0)),
    ((2, 1), (3, 1)),
    ((2, 3), (3, 2)),
    ((3, 1), (4, 0)),
    ((3, 2), (4, 1)),
    ((3, 4), (4, 2)),
    ((4, 1), (5, 0)),
    ((5, 0), (6, 0)),
    ((5, 2), (6, 1)),
    ((6, 1), (7, 0)),
    ((6, 2), (7, 1)),
    ((6, 4), (7, 2)),
    ((7, 0), (8, 0)),
    ((8, 1), (9, 0)),
    ((8, 2), (9, 1)),
    ((8, 4), (9, 2)),
];

fn count_audit(col: &Column, growth: &Growth) -> ColumnAudit {
    let n = col.n;
    let mut detail = Vec::new();
    let mut ok = true;
    let complete = col.blocks.iter().filter(|b| b.complete).count();
    let truncated = col.blocks.last().is_some_and(|b| !b.complete);
    if n == 11 {
        return ColumnAudit {
            n,
            len: col.entries.len(),
            complete_blocks: 0,
            truncated,
            count_law: None,
            count_detail: vec![format!("raw length {}", col.entries.len())],
            stall: col.stall.clone(),
        };
    }
    let expect = |m: usize| growth.ct(n as u8, &BigUint::from(m)).ok();
    let mut total = col.seeds;
    match expect(0) {
        Some(Value::Exact(v)) if v == BigUint::from(total) => {}
        other => {
            ok = false;
            detail.push(format!("Ct_{n}(0): expected {other:?}, seeded {total}"));
        }
    }
    for (m, b) in col.blocks.iter().enumerate() {
        total += b.len;
        let want = expect(m + 1);
        let have = BigUint::from(total);
        if b.complete {
            match want {
                Some(Value::Exact(v)) if v == have => {
                    detail.push(format!("Ct_{n}({}) = {total}", m + 1));
                }
                other => {
                    ok = false;
                    detail.push(format!("Ct_{n}({}): expected {other:?}, got {total}", m + 1));
                }
            }
        } else {
            match want {
                Some(Value::Exact(v)) if v <= have => {
                    ok = false;
                    detail.push(format!(
                        "Ct_{n}({}) = {v} but block still open at {total}",
                        m + 1
                    ));
                }
                Some(v) => detail.push(format!(
                    "truncated at {total} of Ct_{n}({}) = {v}",
                    m + 1
                )),
                None => {
                    ok = false;
                    detail.push(format!("Ct_{n}({}) undefined", m + 1));
                }
            }
        }
    }
    ColumnAudit {
        n,
        len: col.entries.len(),
        complete_blocks: complete,
        truncated,
        count_law: Some(ok),
        count_detail: detail,
        stall: col.stall.clone(),
    }
}

/// Count law, recorded and figure identities, critical-sequence shapes, and
/// numeric index checks with tables up to `A_{max_n+1}`.
pub fn audit_grid(st: &GridState, tables: &TableSet, max_n: u32) -> Result<GridAudit, LaverError> {
    audit_grid_with(st, tables, max_n, &Growth::default())
}

/// [`audit_grid`] with the count law taken from `growth`.
pub fn audit_grid_with(
    st: &GridState,
    tables: &TableSet,
    max_n: u32,
    growth: &Growth,
) -> Result<GridAudit, LaverError> {
    let columns = st.columns.iter().map(|c| count_audit(c, growth)).collect();

    let mut boundary = st.checks.clone();
    for &((n1, i1), (n2, i2)) in FIGURE_IDENTITIES {
        if let (Some(a), Some(b)) = (st.label(n1, i1), st.label(n2, i2)) {
            boundary.push(BoundaryCheck {
                kind: "figure",
                lhs: format!("a({n1},{i1})"),
                rhs: format!("a({n2},{i2})"),
                holds: st.same_label(a, b),
            });
        }
    }

    let mut pattern_failures = Vec::new();
    for col in &st.columns {
        let prefix = pattern_prefix(col.n);
        for (i, e) in col.entries.iter().enumerate() {
            let want: Vec<LabelId> = prefix
                .iter()
                .map(|&x| st.named_label(x))
                .chain([col.labels[i], col.labels[i + 1]])
                .collect();
            let ok = e.seq.len() >= want.len()
                && want.iter().zip(&e.seq).all(|(&a, &b)| st.same_label(a, b));
            if !ok {
                pattern_failures.push(format!(
                    "e({},{i}) does not have the column's critical sequence",
                    col.n
                ));
            }
        }
    }

    let mut num = Numerics::new(tables, max_n);
    let mut index: HashMap<LabelId, CritIndex> = HashMap::new();
    let mut label_index = |l: LabelId, num: &mut Numerics| -> Result<CritIndex, LaverError> {
        if let Some(&c) = index.get(&l) {
            return Ok(c);
        }
        let c = num.crit(&st.dag, st.store.witness[l])?;
        index.insert(l, c);
        Ok(c)
    };

    let mut ordering_violations = Vec::new();
    let mut crit_mismatches = Vec::new();
    let mut by_class: HashMap<LabelId, Vec<(LabelId, CritIndex)>> = HashMap::new();
    for col in &st.columns {
        let mut prev: Option<(usize, CritIndex)> = None;
        for (i, &l) in col.labels.iter().enumerate() {
            let c = label_index(l, &mut num)?;
            by_class.entry(st.store.find(l)).or_default().push((l, c));
            if let Some((pi, p)) = prev {
                let bad = match (p, c) {
                    (CritIndex::Exactly(a), CritIndex::Exactly(b)) => a >= b,
                    (CritIndex::AtLeast(_), CritIndex::Exactly(_)) => true,
                    _ => false,
                };
                if bad {
                    ordering_violations.push(format!(
                        "column {}: a({0},{pi}) = {p} not below a({0},{i}) = {c}",
                        col.n
                    ));
                }
            }
            prev = Some((i, c));
        }
        for (i, e) in col.entries.iter().enumerate() {
            let actual = num.crit(&st.dag, e.emb)?;
            let claimed = label_index(e.seq[0], &mut num)?;
            by_class
                .entry(st.store.find(e.seq[0]))
                .or_default()
                .push((e.seq[0], claimed));
            if !indices_compatible(actual, claimed) {
                crit_mismatches.push(format!(
                    "e({},{i}): crit index {actual}, critical-sequence label {claimed}",
                    col.n
                ));
            }
        }
    }
    for x in Named::ALL {
        let l = st.named_label(x);
        let c = label_index(l, &mut num)?;
        by_class.entry(st.store.find(l)).or_default().push((l, c));
    }

    let mut conflicts: Vec<String> = st.store.conflicts.clone();
    let mut classes: Vec<_> = by_class.into_iter().collect();
    classes.sort_by_key(|(k, _)| *k);
    for (_, members) in classes {
        for w in members.windows(2) {
            if !indices_compatible(w[0].1, w[1].1) {
                conflicts.push(format!(
                    "{} ({}) identified with {} ({})",
                    st.label_expr(w[0].0),
                    w[0].1,
                    st.label_expr(w[1].0),
                    w[1].1
                ));
            }
        }
    }

    let column1_indices: Vec<CritIndex> = st.columns[1]
        .labels
        .iter()
        .map(|&l| label_index(l, &mut num))
        .collect::<Result<_, _>>()?;
    let column1_ok = column1_indices.first() == Some(&CritIndex::Exactly(1))
        && column1_indices.get(1).is_none_or(|c| *c == CritIndex::Exactly(2));

    Ok(GridAudit {
        columns,
        boundary,
        pattern_failures,
        ordering_violations,
        conflicts,
        crit_mismatches,
        column1_indices,
        column1_ok,
    })
}

fn indices_compatible(a: CritIndex, b: CritIndex) -> bool {
    match (a, b) {
        (CritIndex::Exactly(x), CritIndex::Exactly(y)) => x == y,
        (CritIndex::Exactly(x), CritIndex::AtLeast(y))
        | (CritIndex::AtLeast(y), CritIndex::Exactly(x)) => x >= y,
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hat_table() {
        assert_eq!(HAT, [0, 1, 1, 3, 1, 3, 6, 1, 8, 1, 3, 6]);
    }

    #[test]
    fn small_grid_shapes() {
        let st = run_grid(GridConfig::uniform(3)).unwrap();
        for n in 0..COLUMNS {
            assert!(st.len(n) >= 3, "column {n} has {}", st.len(n));
        }
        assert!(st.label_is(4, 0, Named::Kappa3));
        assert!(st.label_is(5, 0, Named::Mu));
        let audit = audit_grid(&st, &TableSet::default(), 8).unwrap();
        assert!(audit.passed(), "{:#?}", audit.failures());
    }
}
