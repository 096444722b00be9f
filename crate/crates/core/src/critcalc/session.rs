//! The fact store: checks scripts against it, and answers order,
//! critical-sequence table and bridge queries about what has been derived.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::Instant;

use serde::Serialize;

use crate::laver::{CritIndex, TableSet};
use crate::term::{NameTable, Term};

use super::expr::{is_ord_var, Emb, Ord, OrdConst, Parser, Relation, Subst};
use super::graph::Graph;
use super::rules::{self, Lemma, Rule, StepInput};
use super::script::{Item, ProofScript};
use super::CalcError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Prelude,
    Hypothesis,
    Derived,
    Claimed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Justification {
    pub rule: String,
    pub premises: Vec<String>,
    pub with: Vec<(String, String)>,
}

#[derive(Clone, Debug)]
pub struct Fact {
    pub id: String,
    pub rel: Relation,
    pub origin: Origin,
    pub justification: Option<Justification>,
    pub script: String,
    /// Rests on a claimed fact or a script hypothesis.
    pub tainted: bool,
}

impl Fact {
    pub fn proven(&self) -> bool {
        !self.tainted && matches!(self.origin, Origin::Prelude | Origin::Derived)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GoalStatus {
    pub id: String,
    pub relation: String,
    /// `proven` or `claimed`.
    pub status: &'static str,
}

/// One line of a script as the checker saw it.
#[derive(Clone, Debug, Serialize)]
pub struct TraceLine {
    pub id: String,
    /// The rule name, or `def`, `hyp`, `claim`.
    pub by: String,
    pub relation: String,
    /// `proven`, `claimed` or `assumed`.
    pub status: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScriptReport {
    pub name: String,
    /// Scripts with free variables register a lemma instead of facts.
    pub lemma: bool,
    pub steps: usize,
    pub goals: Vec<GoalStatus>,
    pub trace: Vec<TraceLine>,
    pub runtime_ms: f64,
}

#[derive(Clone, Debug)]
pub struct Session {
    names: NameTable,
    facts: Vec<Fact>,
    index: HashMap<String, usize>,
    lemmas: BTreeMap<String, Lemma>,
    regular: BTreeSet<OrdConst>,
    defs: BTreeMap<OrdConst, Ord>,
    graph: Graph,
    scripts: Vec<String>,
}

impl Default for Session {
    fn default() -> Self {
        Self::new()
    }
}

fn rule_err(script: &str, step: &str, rule: &str, rel: &Relation, msg: String) -> CalcError {
    CalcError::RuleMismatch {
        script: script.to_string(),
        step: step.to_string(),
        rule: rule.to_string(),
        relation: rel.to_string(),
        msg,
    }
}

impl Session {
    pub fn new() -> Self {
        Session {
            names: NameTable::prelude(),
            facts: Vec::new(),
            index: HashMap::new(),
            lemmas: BTreeMap::new(),
            regular: BTreeSet::new(),
            defs: BTreeMap::new(),
            graph: Graph::default(),
            scripts: Vec::new(),
        }
    }

    pub fn names(&self) -> &NameTable {
        &self.names
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn fact(&self, id: &str) -> Option<&Fact> {
        self.index.get(id).map(|&i| &self.facts[i])
    }

    pub fn lemma(&self, name: &str) -> Option<&Lemma> {
        self.lemmas.get(name)
    }

    pub fn scripts(&self) -> &[String] {
        &self.scripts
    }

    pub fn definition(&self, c: OrdConst) -> Option<&Ord> {
        self.defs.get(&c)
    }

    pub fn is_regular(&self, c: OrdConst) -> bool {
        self.regular.contains(&c)
    }

    /// Checks `script` against the store. On success its derived facts (or,
    /// for a schematic script, its lemma) are committed; on error nothing is.
    pub fn check_script(&mut self, script: &ProofScript) -> Result<ScriptReport, CalcError> {
        let t0 = Instant::now();
        let name = script.name.as_str();
        if self.scripts.iter().any(|s| s == name) || self.lemmas.contains_key(name) {
            return Err(CalcError::DuplicateId {
                script: name.to_string(),
                id: name.to_string(),
            });
        }
        let schematic = script.items.iter().any(|(_, it)| match it {
            Item::Hyp { rel, .. } | Item::Step(super::script::Step { rel, .. }) => !rel.is_ground(),
            _ => false,
        });
        let mut local: Vec<Fact> = Vec::new();
        let mut local_index: HashMap<String, usize> = HashMap::new();
        let mut graph = self.graph.clone();
        let mut regular = self.regular.clone();
        let mut defs = self.defs.clone();
        let mut goals: Vec<String> = Vec::new();
        let mut steps = 0;
        let mut trace = Vec::new();

        for (line, item) in &script.items {
            let (id, rel, origin, just, tainted) = match item {
                Item::Regular(cs) => {
                    regular.extend(cs.iter().copied());
                    continue;
                }
                Item::Goal(g) => {
                    goals.extend(g.iter().cloned());
                    continue;
                }
                Item::Def { id, rel } => {
                    let Relation::EqO(Ord::Const(c), rhs) = rel else {
                        return Err(CalcError::BadDefinition {
                            script: name.into(),
                            id: id.clone(),
                            msg: "a definition reads `<constant> = <ordinal>`".into(),
                        });
                    };
                    if defs.contains_key(c) || !rhs.is_ground() || mentions(rhs, *c) {
                        return Err(CalcError::BadDefinition {
                            script: name.into(),
                            id: id.clone(),
                            msg: format!("`{}` is already defined or the right side is not closed", c.name()),
                        });
                    }
                    defs.insert(*c, rhs.clone());
                    (id, rel, Origin::Prelude, None, false)
                }
                Item::Hyp { id, rel } => (id, rel, Origin::Hypothesis, None, !schematic),
                Item::Claim { id, rel } => (id, rel, Origin::Claimed, None, true),
                Item::Step(st) => {
                    steps += 1;
                    let rule = Rule::parse(&st.rule);
                    let mut premises = Vec::new();
                    let mut tainted = false;
                    for p in &st.from {
                        let f = local_index
                            .get(p)
                            .map(|&i| &local[i])
                            .or_else(|| self.fact(p))
                            .ok_or_else(|| CalcError::UnknownPremise {
                                script: name.into(),
                                step: st.id.clone(),
                                premise: p.clone(),
                            })?;
                        tainted |= f.tainted;
                        premises.push(&f.rel);
                    }
                    let with = self.bindings(name, st)?;
                    let lemma = match &rule {
                        Rule::Lemma(l) => {
                            let lm = self.lemmas.get(l).ok_or_else(|| CalcError::UnknownRule {
                                script: name.into(),
                                step: st.id.clone(),
                                rule: l.clone(),
                            })?;
                            tainted |= lm.tainted;
                            Some(lm)
                        }
                        _ => None,
                    };
                    let inp = StepInput {
                        conclusion: &st.rel,
                        premises,
                        with: &with,
                        regular: &regular,
                        lemma,
                    };
                    rules::check(&inp, &rule)
                        .map_err(|m| rule_err(name, &st.id, rule.name(), &st.rel, m))?;
                    let just = Justification {
                        rule: rule.name().to_string(),
                        premises: st.from.clone(),
                        with: st.with.clone(),
                    };
                    (&st.id, &st.rel, Origin::Derived, Some(just), tainted)
                }
            };
            if local_index.contains_key(id) || self.index.contains_key(id) {
                return Err(CalcError::DuplicateId {
                    script: name.into(),
                    id: id.clone(),
                });
            }
            if !schematic {
                assume_global(&mut graph, rel);
                if graph.has_strict_cycle() {
                    return Err(CalcError::CycleDetected {
                        script: name.into(),
                        step: id.clone(),
                        relation: rel.to_string(),
                        line: *line,
                    });
                }
            }
            trace.push(TraceLine {
                id: id.clone(),
                by: match (&just, origin) {
                    (Some(j), _) => j.rule.clone(),
                    (None, Origin::Prelude) => "def".into(),
                    (None, Origin::Hypothesis) => "hyp".into(),
                    (None, _) => "claim".into(),
                },
                relation: rel.to_string(),
                status: match origin {
                    Origin::Hypothesis => "assumed",
                    _ if tainted => "claimed",
                    _ => "proven",
                },
            });
            local_index.insert(id.clone(), local.len());
            local.push(Fact {
                id: id.clone(),
                rel: rel.clone(),
                origin,
                justification: just,
                script: name.to_string(),
                tainted,
            });
        }

        let mut statuses = Vec::new();
        for g in &goals {
            let f = local_index
                .get(g)
                .map(|&i| &local[i])
                .filter(|f| matches!(f.origin, Origin::Derived | Origin::Claimed))
                .ok_or_else(|| CalcError::GoalUnproved {
                    script: name.into(),
                    goal: g.clone(),
                })?;
            statuses.push(GoalStatus {
                id: g.clone(),
                relation: f.rel.to_string(),
                status: if f.tainted { "claimed" } else { "proven" },
            });
        }

        if schematic {
            let hyps: Vec<Relation> = local
                .iter()
                .filter(|f| f.origin == Origin::Hypothesis)
                .map(|f| f.rel.clone())
                .collect();
            let tainted = local.iter().any(|f| f.tainted);
            let single = goals.len() == 1;
            for g in &goals {
                let f = &local[local_index[g]];
                let lemma = Lemma {
                    name: if single { name.to_string() } else { format!("{name}.{g}") },
                    hyps: hyps.clone(),
                    goal: f.rel.clone(),
                    tainted,
                };
                self.lemmas.insert(lemma.name.clone(), lemma);
            }
        } else {
            for f in local {
                self.index.insert(f.id.clone(), self.facts.len());
                self.facts.push(f);
            }
            self.graph = graph;
            self.regular = regular;
            self.defs = defs;
        }
        self.scripts.push(name.to_string());
        Ok(ScriptReport {
            name: name.to_string(),
            lemma: schematic,
            steps,
            goals: statuses,
            trace,
            runtime_ms: t0.elapsed().as_secs_f64() * 1e3,
        })
    }

    fn bindings(&self, script: &str, st: &super::script::Step) -> Result<Subst, CalcError> {
        let p = Parser::new(&self.names);
        let mut s = Subst::default();
        for (k, v) in &st.with {
            let err = |msg: String| CalcError::Parse {
                line: st.line,
                msg: format!("{script}/{}: binding `{k}`: {msg}", st.id),
            };
            if is_ord_var(k) {
                s.bind_ord(k, p.ord_text(v).map_err(err)?);
            } else {
                s.bind_emb(k, p.emb_text(v).map_err(err)?);
            }
        }
        Ok(s)
    }

    // -----------------------------------------------------------------------
    // Queries

    fn fact_graph(&self, proven_only: bool) -> Graph {
        let mut g = Graph::default();
        for f in &self.facts {
            if !proven_only || f.proven() {
                assume_global(&mut g, &f.rel);
            }
        }
        g.rebuild();
        g
    }

    /// Pairwise comparison of `ords` from stored facts alone (congruence and
    /// transitivity, nothing else). Claimed facts are ignored unless asked.
    pub fn derive_order(&self, ords: &[Ord], include_claimed: bool) -> OrderMatrix {
        let mut g = self.fact_graph(!include_claimed);
        let ids: Vec<_> = ords.iter().map(|o| g.add_ord(o)).collect();
        g.rebuild();
        let reach: Vec<HashMap<u32, bool>> = ids.iter().map(|&c| g.reach(c)).collect();
        let cells = (0..ids.len())
            .map(|i| {
                (0..ids.len())
                    .map(|k| {
                        let (a, b) = (g.find(ids[i]), g.find(ids[k]));
                        if a == b {
                            return Cmp::Eq;
                        }
                        match (reach[i].get(&b), reach[k].get(&a)) {
                            (Some(true), _) => Cmp::Lt,
                            (_, Some(true)) => Cmp::Gt,
                            (Some(false), Some(false)) => Cmp::Eq,
                            (Some(false), None) => Cmp::Le,
                            (None, Some(false)) => Cmp::Ge,
                            (None, None) => Cmp::Unknown,
                        }
                    })
                    .collect()
            })
            .collect();
        OrderMatrix {
            ordinals: ords.iter().map(ToString::to_string).collect(),
            cells,
        }
    }

    /// A term whose critical point is `o`, when `o` is built from
    /// critical points and applications only.
    pub fn witness(&self, o: &Ord) -> Option<Term> {
        match o {
            Ord::Const(c) => self.witness(self.defs.get(c)?),
            Ord::Crit(e) => e.to_term(),
            Ord::App(e, x) => Some(Term::apply(e.to_term()?, self.witness(x)?)),
            Ord::Var(_) | Ord::Sup(..) => None,
        }
    }

    pub fn verify_table2(&self, tables: &TableSet, max_n: u32) -> Result<Table2Report, CalcError> {
        let mut g = self.fact_graph(true);
        let mut cells = Vec::new();
        let k4 = g.add_ord(&Ord::c(OrdConst::Kappa4));
        for row in table2_rows() {
            let jn = Emb::j(row.n);
            let mut claims: Vec<(CellKind, Relation)> = Vec::new();
            claims.push((CellKind::Crit, Relation::EqO(Ord::Crit(jn.clone()), row.seq[0].clone())));
            for w in row.seq.windows(2) {
                claims.push((CellKind::Step, Relation::EqO(Ord::app(jn.clone(), w[0].clone()), w[1].clone())));
            }
            if row.above_kappa4 {
                let last = row.seq.last().expect("non-empty").clone();
                claims.push((
                    CellKind::AboveKappa4,
                    Relation::LtO(Ord::c(OrdConst::Kappa4), Ord::app(jn.clone(), last)),
                ));
            }
            for (a, b) in &row.other {
                claims.push((CellKind::Other, Relation::EqO(Ord::app(jn.clone(), a.clone()), b.clone())));
            }
            for (kind, rel) in claims {
                let (a, b, _) = g.add_relation(&rel);
                g.rebuild();
                let proved = match rel {
                    Relation::EqO(..) => g.same(a, b),
                    _ => g.lt(k4, b),
                };
                let numeric = match &rel {
                    Relation::EqO(l, r) => match (self.witness(l), self.witness(r)) {
                        (Some(x), Some(y)) => Some((
                            tables.crit_index(&x, max_n)?,
                            tables.crit_index(&y, max_n)?,
                        )),
                        _ => None,
                    },
                    _ => None,
                };
                let status = match numeric {
                    Some((CritIndex::Exactly(x), CritIndex::Exactly(y))) if x != y => {
                        CellStatus::Mismatch { lhs: x, rhs: y }
                    }
                    Some((CritIndex::Exactly(x), CritIndex::AtLeast(y))) if x < y => {
                        CellStatus::Mismatch { lhs: x, rhs: y }
                    }
                    Some((CritIndex::AtLeast(x), CritIndex::Exactly(y))) if y < x => {
                        CellStatus::Mismatch { lhs: x, rhs: y }
                    }
                    _ if proved => CellStatus::Proved,
                    Some((CritIndex::Exactly(x), _)) => CellStatus::Numeric { index: x },
                    _ => CellStatus::Undischarged,
                };
                cells.push(Table2Cell {
                    row: row.n,
                    kind,
                    relation: rel.to_string(),
                    status,
                });
            }
        }
        Ok(Table2Report { cells })
    }

    /// Checks stored facts against the tables `A_0..A_max_n`: an equivalence
    /// at a level `≥ γ_m` must give equal images in every `A_n`, `n ≤ m`, and
    /// strict comparisons must respect critical-point indices.
    pub fn bridge_audit(&self, tables: &TableSet, max_n: u32) -> Result<BridgeReport, CalcError> {
        let mut g = self.fact_graph(false);
        let mut idx: Vec<(u32, CritIndex, String)> = Vec::new();
        let mut seen = BTreeSet::new();
        for f in &self.facts {
            for o in f.rel.ordinals() {
                for sub in subordinals(o) {
                    if let Some(t) = self.witness(&sub) {
                        let c = g.add_ord(&sub);
                        if seen.insert(sub.to_string()) {
                            idx.push((c, tables.crit_index(&t, max_n)?, sub.to_string()));
                        }
                    }
                }
            }
        }
        g.rebuild();
        let reach: Vec<HashMap<u32, bool>> = idx.iter().map(|(c, _, _)| g.reach(*c)).collect();
        let mut report = BridgeReport::default();
        for (i, (_, ia, na)) in idx.iter().enumerate() {
            for (k, (cb, ib, nb)) in idx.iter().enumerate() {
                if i == k {
                    continue;
                }
                let Some(&strict) = reach[i].get(&g.find(*cb)) else { continue };
                report.orders_checked += 1;
                // a ≤ b (strictly if flagged) must not contradict the indices
                let bad = match (*ia, *ib) {
                    (CritIndex::Exactly(x), CritIndex::Exactly(y)) => x > y || (strict && x == y),
                    (CritIndex::AtLeast(x), CritIndex::Exactly(y)) => x > y,
                    _ => false,
                };
                if bad {
                    return Err(CalcError::BridgeViolation {
                        fact: format!("{na} {} {nb}", if strict { "<" } else { "<=" }),
                        detail: format!("indices {ia} and {ib}"),
                    });
                }
            }
        }
        for f in &self.facts {
            let Relation::EquivAt(e, h, level) = &f.rel else { continue };
            let (Some(te), Some(th)) = (e.to_term(), h.to_term()) else { continue };
            let lc = g.add_ord(level);
            g.rebuild();
            // largest known index below the level
            let mut m: Option<u32> = None;
            for (k, (c, ic, _)) in idx.iter().enumerate() {
                let below = g.find(*c) == g.find(lc) || reach[k].contains_key(&g.find(lc));
                if below {
                    let b = ic.lower_bound();
                    m = Some(m.map_or(b, |x: u32| x.max(b)));
                }
            }
            let Some(m) = m else { continue };
            report.equivs_checked += 1;
            for n in 0..=m.min(max_n) {
                let (x, y) = (tables.eval(&te, n)?, tables.eval(&th, n)?);
                if x != y {
                    return Err(CalcError::BridgeViolation {
                        fact: f.id.clone(),
                        detail: format!("`{}` is {x} but `{}` is {y} in A_{n}", e, h),
                    });
                }
                report.table_checks += 1;
            }
        }
        Ok(report)
    }
}

fn mentions(o: &Ord, c: OrdConst) -> bool {
    match o {
        Ord::Const(d) => *d == c,
        Ord::Var(_) | Ord::Crit(_) => false,
        Ord::App(_, x) | Ord::Sup(_, x) => mentions(x, c),
    }
}

fn subordinals(o: &Ord) -> Vec<Ord> {
    let mut out = vec![o.clone()];
    if let Ord::App(_, x) | Ord::Sup(_, x) = o {
        out.extend(subordinals(x));
    }
    out
}

fn assume_global(g: &mut Graph, r: &Relation) {
    let (a, b, _) = g.add_relation(r);
    match r {
        Relation::EqO(..) | Relation::EqE(..) => {
            g.union(a, b);
        }
        Relation::LtO(..) => g.add_edge(a, b, true),
        Relation::LeO(..) => g.add_edge(a, b, false),
        Relation::EquivAt(..) => {}
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Cmp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
    Unknown,
}

impl Cmp {
    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Eq => "=",
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
            Cmp::Unknown => "?",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderMatrix {
    pub ordinals: Vec<String>,
    pub cells: Vec<Vec<Cmp>>,
}

impl OrderMatrix {
    /// Every consecutive pair is strictly increasing.
    pub fn is_strict_chain(&self) -> bool {
        (1..self.cells.len()).all(|i| self.cells[i - 1][i] == Cmp::Lt)
    }

    pub fn unknown_pairs(&self) -> usize {
        self.cells
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().skip(i + 1))
            .filter(|c| **c == Cmp::Unknown)
            .count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellKind {
    Crit,
    Step,
    AboveKappa4,
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CellStatus {
    /// Derived in the store.
    Proved,
    /// Not derived, but both sides have the same exact index in the tables.
    Numeric { index: u32 },
    /// Derived or not, the tables disagree.
    Mismatch { lhs: u32, rhs: u32 },
    Undischarged,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table2Cell {
    pub row: u64,
    pub kind: CellKind,
    pub relation: String,
    #[serde(flatten)]
    pub status: CellStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table2Report {
    pub cells: Vec<Table2Cell>,
}

impl Table2Report {
    pub fn passed(&self) -> bool {
        self.cells
            .iter()
            .all(|c| matches!(c.status, CellStatus::Proved | CellStatus::Numeric { .. }))
    }

    pub fn count(&self, f: impl Fn(&CellStatus) -> bool) -> usize {
        self.cells.iter().filter(|c| f(&c.status)).count()
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BridgeReport {
    pub equivs_checked: usize,
    pub orders_checked: usize,
    pub table_checks: usize,
}

pub struct Table2Row {
    pub n: u64,
    pub seq: Vec<Ord>,
    pub above_kappa4: bool,
    pub other: Vec<(Ord, Ord)>,
}

/// Critical sequences of `j_1..j_16`, as `κ`-notation.
pub fn table2_rows() -> Vec<Table2Row> {
    use OrdConst::*;
    let k = |c: OrdConst| Ord::c(c);
    let s = |c: OrdConst, n: u64| Ord::sup_n(c, n);
    let row = |n, seq: Vec<Ord>, above_kappa4, other: Vec<(Ord, Ord)>| Table2Row {
        n,
        seq,
        above_kappa4,
        other,
    };
    vec![
        row(1, vec![k(Kappa0), k(Kappa1), k(Kappa2), k(Kappa3), k(Kappa4)], false, vec![]),
        row(2, vec![k(Kappa1), k(Kappa2), k(Kappa3), k(Kappa4)], false, vec![]),
        row(3, vec![k(Kappa0), k(Kappa2), k(Kappa3), k(Kappa4)], false, vec![(k(Kappa1), k(Kappa2_5))]),
        row(4, vec![k(Kappa2), k(Kappa2_5), k(Kappa3), k(Kappa4)], false, vec![]),
        row(5, vec![k(Kappa0), k(Kappa1), k(Kappa2_5), k(Kappa4)], false, vec![]),
        row(6, vec![k(Kappa1), k(Kappa2_5), s(Kappa2, 5)], true, vec![]),
        row(7, vec![k(Kappa0), k(Kappa2_5), s(Kappa2, 6), s(Kappa3, 6)], true, vec![(k(Kappa1), k(Kappa3))]),
        row(8, vec![k(Kappa2_5), k(Kappa3), s(Kappa2, 7), s(Kappa3, 7)], true, vec![]),
        row(9, vec![k(Kappa0), k(Kappa1), k(Kappa2), s(Kappa2, 7)], true, vec![]),
        row(10, vec![k(Kappa1), k(Kappa2), s(Kappa2, 7), s(Kappa3, 9)], true, vec![]),
        row(11, vec![k(Kappa0), k(Kappa2), s(Kappa2, 7), s(Kappa3, 10)], true, vec![(k(Kappa1), k(Kappa3))]),
        row(12, vec![k(Kappa2), k(Kappa3), s(Kappa2, 7), s(Kappa3, 11)], true, vec![]),
        row(13, vec![k(Kappa0), k(Kappa1), k(Kappa3), s(Kappa2, 7)], true, vec![]),
        row(14, vec![k(Kappa1), k(Kappa3), s(Kappa2, 13), s(Kappa2, 7)], true, vec![]),
        row(15, vec![k(Kappa0), k(Kappa3), s(Kappa2, 14), s(Kappa2, 13)], true, vec![]),
        row(16, vec![k(Kappa3), s(Kappa1, 15), s(Kappa2, 15), s(Kappa2, 14)], true, vec![]),
    ]
}
