//! The rule catalog. A step is checked in a graph holding only its cited
//! premises: the rule adds its own instances (equalities, order edges or
//! equivalences over the expressions present), and the conclusion must then
//! follow by congruence and transitivity.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::expr::{Emb, Ord, OrdConst, Relation, Subst};
use super::graph::{Graph, Node, C};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    CritApp,
    AppApp,
    AppSup,
    SupComp,
    CompApp,
    BelowCrit,
    AboveCrit,
    Inflate,
    Mono,
    MonoRev,
    SupAbove,
    SupLe,
    SupMono,
    SupStrict,
    Chain,
    EquivRefl,
    EquivSym,
    EquivTrans,
    EquivCong,
    EquivLift,
    EquivCrit,
    EquivEval,
    EquivSup,
    EquivWeaken,
    Approx,
    CompApprox,
    Absorb,
    Ld,
    AppComp,
    CompAssoc,
    Lemma(String),
}

impl Rule {
    pub const BUILTIN: [(&'static str, Rule); 30] = [
        ("crit-app", Rule::CritApp),
        ("app-app", Rule::AppApp),
        ("app-sup", Rule::AppSup),
        ("sup-comp", Rule::SupComp),
        ("comp-app", Rule::CompApp),
        ("below-crit", Rule::BelowCrit),
        ("above-crit", Rule::AboveCrit),
        ("inflate", Rule::Inflate),
        ("mono", Rule::Mono),
        ("mono-rev", Rule::MonoRev),
        ("sup-above", Rule::SupAbove),
        ("sup-le", Rule::SupLe),
        ("sup-mono", Rule::SupMono),
        ("sup-strict", Rule::SupStrict),
        ("chain", Rule::Chain),
        ("equiv-refl", Rule::EquivRefl),
        ("equiv-sym", Rule::EquivSym),
        ("equiv-trans", Rule::EquivTrans),
        ("equiv-cong", Rule::EquivCong),
        ("equiv-lift", Rule::EquivLift),
        ("equiv-crit", Rule::EquivCrit),
        ("equiv-eval", Rule::EquivEval),
        ("equiv-sup", Rule::EquivSup),
        ("equiv-weaken", Rule::EquivWeaken),
        ("approx", Rule::Approx),
        ("comp-approx", Rule::CompApprox),
        ("absorb", Rule::Absorb),
        ("ld", Rule::Ld),
        ("app-comp", Rule::AppComp),
        ("comp-assoc", Rule::CompAssoc),
    ];

    /// Built-in names and their aliases; anything else is a lemma name.
    pub fn parse(name: &str) -> Rule {
        let alias = match name {
            "R1" => "crit-app",
            "R2" => "app-app",
            "eq" | "trans" => "chain",
            other => other,
        };
        Rule::BUILTIN
            .iter()
            .find(|(n, _)| *n == alias)
            .map(|(_, r)| r.clone())
            .unwrap_or_else(|| Rule::Lemma(name.to_string()))
    }

    pub fn name(&self) -> &str {
        match self {
            Rule::Lemma(n) => n,
            r => Rule::BUILTIN
                .iter()
                .find(|(_, b)| b == r)
                .map(|(n, _)| *n)
                .unwrap_or("?"),
        }
    }
}

/// A proved schematic fact usable as a rule.
#[derive(Clone, Debug)]
pub struct Lemma {
    pub name: String,
    pub hyps: Vec<Relation>,
    pub goal: Relation,
    /// Depends on a claimed fact somewhere below.
    pub tainted: bool,
}

pub(crate) struct StepInput<'a> {
    pub conclusion: &'a Relation,
    pub premises: Vec<&'a Relation>,
    pub with: &'a Subst,
    pub regular: &'a BTreeSet<OrdConst>,
    pub lemma: Option<&'a Lemma>,
}

struct Ctx {
    g: Graph,
    equivs: Vec<(C, C, C)>,
}

impl Ctx {
    fn new(inp: &StepInput<'_>) -> (Ctx, (C, C, Option<C>)) {
        let mut g = Graph::default();
        let mut equivs = Vec::new();
        for p in &inp.premises {
            assume(&mut g, &mut equivs, p);
        }
        for e in inp.with.embs() {
            g.add_emb(e);
        }
        for o in inp.with.ords() {
            g.add_ord(o);
        }
        let sides = g.add_relation(inp.conclusion);
        g.rebuild();
        (Ctx { g, equivs }, sides)
    }

    fn classes(&mut self) -> HashMap<C, Vec<Node>> {
        self.g.snapshot()
    }

    fn has_equiv(&mut self, x: C, y: C, l: C) -> bool {
        if self.g.same(x, y) {
            return true;
        }
        let eqs = self.equivs.clone();
        eqs.into_iter().any(|(a, b, m)| {
            self.g.same(m, l)
                && ((self.g.same(a, x) && self.g.same(b, y))
                    || (self.g.same(a, y) && self.g.same(b, x)))
        })
    }

    fn holds(&mut self, sides: (C, C, Option<C>), r: &Relation) -> bool {
        let (a, b, l) = sides;
        match r {
            Relation::EqO(..) | Relation::EqE(..) => self.g.same(a, b),
            Relation::LtO(..) => self.g.lt(a, b),
            Relation::LeO(..) => self.g.le(a, b),
            Relation::EquivAt(..) => self.has_equiv(a, b, l.expect("level")),
        }
    }
}

fn assume(g: &mut Graph, equivs: &mut Vec<(C, C, C)>, r: &Relation) {
    let (a, b, l) = g.add_relation(r);
    match r {
        Relation::EqO(..) | Relation::EqE(..) => {
            g.union(a, b);
        }
        Relation::LtO(..) => g.add_edge(a, b, true),
        Relation::LeO(..) => g.add_edge(a, b, false),
        Relation::EquivAt(..) => equivs.push((a, b, l.expect("level"))),
    }
}

fn members<'m>(cls: &'m HashMap<C, Vec<Node>>, g: &Graph, c: C) -> &'m [Node] {
    cls.get(&g.find(c)).map(Vec::as_slice).unwrap_or(&[])
}

/// All nodes of the graph, paired with their class.
fn all_nodes(cls: &HashMap<C, Vec<Node>>) -> Vec<(C, Node)> {
    let mut v: Vec<(C, Node)> = cls
        .iter()
        .flat_map(|(c, ns)| ns.iter().map(move |n| (*c, n.clone())))
        .collect();
    v.sort_by_key(|(c, _)| *c);
    v
}

pub(crate) fn check(inp: &StepInput<'_>, rule: &Rule) -> Result<(), String> {
    let (mut cx, sides) = Ctx::new(inp);
    let concl = inp.conclusion;
    let is_equiv = matches!(concl, Relation::EquivAt(..));
    match rule {
        Rule::CritApp
        | Rule::AppApp
        | Rule::AppSup
        | Rule::SupComp
        | Rule::CompApp
        | Rule::Absorb
        | Rule::Ld
        | Rule::AppComp
        | Rule::CompAssoc => {
            for _ in 0..2 {
                if !identity_round(&mut cx, rule) {
                    break;
                }
            }
        }
        Rule::BelowCrit => below_crit(&mut cx),
        Rule::EquivEval => equiv_eval(&mut cx),
        Rule::EquivSup => equiv_sup(&mut cx),
        Rule::AboveCrit
        | Rule::Inflate
        | Rule::Mono
        | Rule::MonoRev
        | Rule::SupAbove
        | Rule::SupLe
        | Rule::SupMono
        | Rule::SupStrict => order_round(&mut cx, rule, inp.regular),
        Rule::Chain => {}
        Rule::Lemma(name) => {
            let lemma = inp.lemma.ok_or_else(|| format!("unknown rule or lemma `{name}`"))?;
            return apply_lemma(cx, sides, inp, lemma);
        }
        _ => {
            if !is_equiv {
                return Err("the rule concludes an equivalence".into());
            }
            let (a, b, l) = (sides.0, sides.1, sides.2.expect("level"));
            return if equiv_rule(&mut cx, rule, a, b, l, concl)? {
                Ok(())
            } else {
                Err("conclusion is not an instance of the rule over the cited premises".into())
            };
        }
    }
    if cx.holds(sides, concl) {
        Ok(())
    } else {
        Err("conclusion does not follow from the cited premises".into())
    }
}

// ---------------------------------------------------------------------------
// Identities, applied wherever their left-hand side occurs.

/// Right-hand side of an identity instance, built over existing classes.
enum T {
    C(C),
    Crit(Box<T>),
    OApp(Box<T>, Box<T>),
    OSup(Box<T>, Box<T>),
    EApp(Box<T>, Box<T>),
    EComp(Box<T>, Box<T>),
}

fn c(x: &C) -> Box<T> {
    Box::new(T::C(*x))
}

fn build(g: &mut Graph, t: &T) -> C {
    let n = match t {
        T::C(x) => return *x,
        T::Crit(a) => Node::OCrit(build(g, a)),
        T::OApp(a, b) => Node::OApp(build(g, a), build(g, b)),
        T::OSup(a, b) => Node::OSup(build(g, a), build(g, b)),
        T::EApp(a, b) => Node::EApp(build(g, a), build(g, b)),
        T::EComp(a, b) => Node::EComp(build(g, a), build(g, b)),
    };
    g.mk(n)
}

fn identity_round(cx: &mut Ctx, rule: &Rule) -> bool {
    let cls = cx.classes();
    let mut rhs: Vec<(C, T)> = Vec::new();
    let g = &cx.g;
    let same = |x: &C, y: &C| g.find(*x) == g.find(*y);
    for (cl, n) in all_nodes(&cls) {
        match (rule, &n) {
            // crit(e1 e2) = e1(crit e2)
            (Rule::CritApp, Node::OCrit(e)) => {
                for m in members(&cls, g, *e) {
                    if let Node::EApp(e1, e2) = m {
                        rhs.push((cl, T::OApp(c(e1), Box::new(T::Crit(c(e2))))));
                    }
                }
            }
            // e1 e2 (e1(β)) = e1(e2(β))
            (Rule::AppApp, Node::OApp(p, q)) => {
                for m in members(&cls, g, *p) {
                    let Node::EApp(e1, e2) = m else { continue };
                    for k in members(&cls, g, *q) {
                        if let Node::OApp(e1b, beta) = k {
                            if same(e1b, e1) {
                                rhs.push((cl, T::OApp(c(e1), Box::new(T::OApp(c(e2), c(beta))))));
                            }
                        }
                    }
                }
            }
            // e'(e(<α)) = e'e(<e'(α))
            (Rule::AppSup, Node::OApp(e1, s)) => {
                for m in members(&cls, g, *s) {
                    if let Node::OSup(e, a) = m {
                        rhs.push((
                            cl,
                            T::OSup(Box::new(T::EApp(c(e1), c(e))), Box::new(T::OApp(c(e1), c(a)))),
                        ));
                    }
                }
            }
            // e'(<e(<α)) = (e' ∘ e)(<α)
            (Rule::SupComp, Node::OSup(e1, s)) => {
                for m in members(&cls, g, *s) {
                    if let Node::OSup(e, a) = m {
                        rhs.push((cl, T::OSup(Box::new(T::EComp(c(e1), c(e))), c(a))));
                    }
                }
            }
            // (e ∘ f)(x) = e(f(x)), for ordinals and embeddings alike
            (Rule::CompApp, Node::OApp(h, a)) => {
                for m in members(&cls, g, *h) {
                    if let Node::EComp(e, f) = m {
                        rhs.push((cl, T::OApp(c(e), Box::new(T::OApp(c(f), c(a))))));
                    }
                }
            }
            (Rule::CompApp, Node::EApp(h, a)) => {
                for m in members(&cls, g, *h) {
                    if let Node::EComp(e, f) = m {
                        rhs.push((cl, T::EApp(c(e), Box::new(T::EApp(c(f), c(a))))));
                    }
                }
            }
            // e f ∘ e = e ∘ f
            (Rule::Absorb, Node::EComp(p, e2)) => {
                for m in members(&cls, g, *p) {
                    if let Node::EApp(e, f) = m {
                        if same(e, e2) {
                            rhs.push((cl, T::EComp(c(e), c(f))));
                        }
                    }
                }
            }
            // e f (e h) = e (f h)
            (Rule::Ld, Node::EApp(p, q)) => {
                for m in members(&cls, g, *p) {
                    let Node::EApp(e, f) = m else { continue };
                    for k in members(&cls, g, *q) {
                        if let Node::EApp(e2, h) = k {
                            if same(e2, e) {
                                rhs.push((cl, T::EApp(c(e), Box::new(T::EApp(c(f), c(h))))));
                            }
                        }
                    }
                }
            }
            // e(f ∘ h) = e(f) ∘ e(h)
            (Rule::AppComp, Node::EApp(e, q)) => {
                for m in members(&cls, g, *q) {
                    if let Node::EComp(f, h) = m {
                        rhs.push((
                            cl,
                            T::EComp(Box::new(T::EApp(c(e), c(f))), Box::new(T::EApp(c(e), c(h)))),
                        ));
                    }
                }
            }
            // (a ∘ b) ∘ h = a ∘ (b ∘ h)
            (Rule::CompAssoc, Node::EComp(l, h)) => {
                for m in members(&cls, g, *l) {
                    if let Node::EComp(a, b) = m {
                        rhs.push((cl, T::EComp(c(a), Box::new(T::EComp(c(b), c(h))))));
                    }
                }
            }
            _ => {}
        }
    }
    let mut changed = false;
    for (cl, t) in rhs {
        let id = build(&mut cx.g, &t);
        changed |= cx.g.union(cl, id);
    }
    cx.g.rebuild();
    changed
}

// ---------------------------------------------------------------------------
// Conditional equalities

fn below_crit(cx: &mut Ctx) {
    let cls = cx.classes();
    for (c, n) in all_nodes(&cls) {
        if let Node::OApp(e, a) = n {
            let crit = cx.g.mk(Node::OCrit(e));
            if cx.g.lt(a, crit) {
                cx.g.union(c, a);
            }
        }
    }
    cx.g.rebuild();
}

fn equiv_partners(cx: &mut Ctx, e: C) -> Vec<(C, C)> {
    let eqs = cx.equivs.clone();
    let mut out = Vec::new();
    for (a, b, l) in eqs {
        if cx.g.same(a, e) {
            out.push((b, l));
        }
        if cx.g.same(b, e) {
            out.push((a, l));
        }
    }
    out
}

fn equiv_eval(cx: &mut Ctx) {
    let cls = cx.classes();
    for (c, n) in all_nodes(&cls) {
        if let Node::OApp(e, a) = n {
            for (f, l) in equiv_partners(cx, e) {
                let y = cx.g.mk(Node::OApp(f, a));
                if cx.g.lt(c, l) || cx.g.lt(y, l) {
                    cx.g.union(c, y);
                }
            }
        }
    }
    cx.g.rebuild();
}

fn equiv_sup(cx: &mut Ctx) {
    let cls = cx.classes();
    for (c, n) in all_nodes(&cls) {
        if let Node::OSup(e, a) = n {
            for (f, l) in equiv_partners(cx, e) {
                let ea = cx.g.mk(Node::OApp(e, a));
                let fa = cx.g.mk(Node::OApp(f, a));
                if cx.g.le(ea, l) || cx.g.le(fa, l) {
                    let y = cx.g.mk(Node::OSup(f, a));
                    cx.g.union(c, y);
                }
            }
        }
    }
    cx.g.rebuild();
}

// ---------------------------------------------------------------------------
// Order rules: add edges for every instance over the present expressions.

fn order_round(cx: &mut Ctx, rule: &Rule, regular: &BTreeSet<OrdConst>) {
    let cls = cx.classes();
    let nodes = all_nodes(&cls);
    let apps: Vec<(C, C, C)> = nodes
        .iter()
        .filter_map(|(c, n)| match n {
            Node::OApp(e, a) => Some((*c, *e, *a)),
            _ => None,
        })
        .collect();
    let sups: Vec<(C, C, C)> = nodes
        .iter()
        .filter_map(|(c, n)| match n {
            Node::OSup(e, a) => Some((*c, *e, *a)),
            _ => None,
        })
        .collect();
    let mut edges = Vec::new();
    match rule {
        Rule::AboveCrit => {
            for &(c, e, a) in &apps {
                let crit = cx.g.mk(Node::OCrit(e));
                if cx.g.le(crit, a) {
                    edges.push((a, c, true));
                }
            }
        }
        Rule::Inflate => {
            for &(c, _, a) in &apps {
                edges.push((a, c, false));
            }
        }
        Rule::Mono => {
            for &(c1, e1, a1) in &apps {
                for &(c2, e2, a2) in &apps {
                    if c1 == c2 || !cx.g.same(e1, e2) {
                        continue;
                    }
                    match cx.g.path(a1, a2) {
                        Some(s) => edges.push((c1, c2, s)),
                        None => {}
                    }
                }
            }
        }
        Rule::MonoRev => {
            for &(c1, e1, a1) in &apps {
                for &(c2, e2, a2) in &apps {
                    if c1 == c2 || !cx.g.same(e1, e2) {
                        continue;
                    }
                    if let Some(s) = cx.g.path(c1, c2) {
                        edges.push((a1, a2, s));
                    }
                }
            }
        }
        Rule::SupAbove => {
            for &(c1, e1, b) in &apps {
                for &(c2, e2, a) in &sups {
                    if cx.g.same(e1, e2) && cx.g.lt(b, a) {
                        edges.push((c1, c2, true));
                    }
                }
            }
        }
        Rule::SupLe => {
            for &(c, e, a) in &sups {
                let y = cx.g.mk(Node::OApp(e, a));
                edges.push((c, y, false));
            }
        }
        Rule::SupMono => {
            for &(c1, e1, a1) in &sups {
                for &(c2, e2, a2) in &sups {
                    if c1 != c2 && cx.g.same(e1, e2) && cx.g.le(a1, a2) {
                        edges.push((c1, c2, false));
                    }
                }
            }
        }
        Rule::SupStrict => {
            for &(c, e, a) in &sups {
                let is_regular = members(&cls, &cx.g, a)
                    .iter()
                    .any(|n| matches!(n, Node::OC(k) if regular.contains(k)));
                let y = cx.g.mk(Node::OApp(e, a));
                if is_regular && cx.g.lt(a, y) {
                    edges.push((c, y, true));
                }
            }
        }
        _ => unreachable!("not an order rule"),
    }
    for (a, b, s) in edges {
        cx.g.add_edge(a, b, s);
    }
}

// ---------------------------------------------------------------------------
// Equivalence rules, checked against the conclusion `a ≡_l b`.

fn equiv_rule(
    cx: &mut Ctx,
    rule: &Rule,
    a: C,
    b: C,
    l: C,
    concl: &Relation,
) -> Result<bool, String> {
    let cls = cx.classes();
    Ok(match rule {
        Rule::EquivRefl => cx.g.same(a, b),
        Rule::EquivSym => cx.has_equiv(a, b, l),
        Rule::EquivTrans => equiv_path(cx, a, b, l),
        Rule::EquivCong => {
            let (ma, mb) = (members(&cls, &cx.g, a).to_vec(), members(&cls, &cx.g, b).to_vec());
            let mut ok = false;
            // `id(x)` has been rewritten to `x`, so a side may match it implicitly
            let id = cx.g.mk(Node::EId);
            for (xs, other) in [(&ma, b), (&mb, a)] {
                for x in xs {
                    if let Node::EApp(x1, x2) = x {
                        ok |= cx.has_equiv(*x1, id, l) && cx.has_equiv(*x2, other, l);
                    }
                }
            }
            for x in &ma {
                for y in &mb {
                    let pair = match (x, y) {
                        (Node::EApp(a1, a2), Node::EApp(b1, b2))
                        | (Node::EComp(a1, a2), Node::EComp(b1, b2)) => Some((*a1, *a2, *b1, *b2)),
                        _ => None,
                    };
                    if let Some((a1, a2, b1, b2)) = pair {
                        ok |= cx.has_equiv(a1, b1, l) && cx.has_equiv(a2, b2, l);
                    }
                }
            }
            ok
        }
        Rule::EquivLift => {
            let (ma, mb, ml) = (
                members(&cls, &cx.g, a).to_vec(),
                members(&cls, &cx.g, b).to_vec(),
                members(&cls, &cx.g, l).to_vec(),
            );
            let mut ok = false;
            for x in &ma {
                let Node::EApp(e1, a2) = x else { continue };
                for y in &mb {
                    let Node::EApp(f1, b2) = y else { continue };
                    if !cx.g.same(*e1, *f1) {
                        continue;
                    }
                    for z in &ml {
                        if let Node::OApp(h, beta) = z {
                            ok |= cx.g.same(*h, *e1) && cx.has_equiv(*a2, *b2, *beta);
                        }
                    }
                }
            }
            ok
        }
        Rule::EquivCrit => {
            let ml = members(&cls, &cx.g, l).to_vec();
            let is_id = |c: C| members(&cls, &cx.g, c).contains(&Node::EId);
            ml.iter().any(|n| match n {
                Node::OCrit(e) => {
                    (is_id(b) && cx.g.find(*e) == cx.g.find(a))
                        || (is_id(a) && cx.g.find(*e) == cx.g.find(b))
                }
                _ => false,
            })
        }
        Rule::EquivWeaken => {
            let eqs = cx.equivs.clone();
            eqs.into_iter().any(|(x, y, m)| {
                ((cx.g.same(x, a) && cx.g.same(y, b)) || (cx.g.same(x, b) && cx.g.same(y, a)))
                    && cx.g.le(l, m)
            })
        }
        Rule::CompApprox => comp_approx(cx, &cls, a, b, l) || comp_approx(cx, &cls, b, a, l),
        Rule::Approx => {
            let Relation::EquivAt(x, y, theta) = concl else { unreachable!() };
            approx(cx, x, y, theta)? || approx(cx, y, x, theta)?
        }
        _ => unreachable!("not an equivalence rule"),
    })
}

fn equiv_path(cx: &mut Ctx, a: C, b: C, l: C) -> bool {
    let mut eqs: Vec<(C, C)> = Vec::new();
    for (x, y, m) in cx.equivs.clone() {
        if cx.g.same(m, l) {
            eqs.push((cx.g.find(x), cx.g.find(y)));
        }
    }
    let (a, b) = (cx.g.find(a), cx.g.find(b));
    let mut seen = BTreeSet::new();
    let mut q = VecDeque::from([a]);
    while let Some(u) = q.pop_front() {
        if u == b {
            return true;
        }
        if !seen.insert(u) {
            continue;
        }
        for &(x, y) in &eqs {
            if x == u {
                q.push_back(y);
            }
            if y == u {
                q.push_back(x);
            }
        }
    }
    false
}

/// `e ≡_{e(crit f)} e ∘ f`.
fn comp_approx(cx: &mut Ctx, cls: &HashMap<C, Vec<Node>>, e: C, ef: C, l: C) -> bool {
    let comps: Vec<(C, C)> = members(cls, &cx.g, ef)
        .iter()
        .filter_map(|n| match n {
            Node::EComp(x, f) => Some((*x, *f)),
            _ => None,
        })
        .collect();
    comps.into_iter().any(|(x, f)| {
        if !cx.g.same(x, e) {
            return false;
        }
        let crit = cx.g.mk(Node::OCrit(f));
        let want = cx.g.mk(Node::OApp(e, crit));
        cx.g.same(want, l)
    })
}

/// `e e1 … el ≡_θ e(e1 … el)` when `θ ≤ e e1 … ei (crit e)` for `1 ≤ i < l`.
fn approx(cx: &mut Ctx, lhs: &Emb, rhs: &Emb, theta: &Ord) -> Result<bool, String> {
    let Emb::App(e, x) = rhs else { return Ok(false) };
    let (e, x) = ((**e).clone(), (**x).clone());
    let full = lhs.spine();
    let head = e.spine();
    if head.len() >= full.len() || full[..head.len()] != head[..] {
        return Ok(false);
    }
    let args = &full[head.len()..];
    let folded = args[1..]
        .iter()
        .fold(args[0].clone(), |acc, a| Emb::app(acc, a.clone()));
    if folded != x {
        return Ok(false);
    }
    let th = cx.g.add_ord(theta);
    let crit = Ord::Crit(e.clone());
    let mut prefix = e.clone();
    for (i, a) in args[..args.len() - 1].iter().enumerate() {
        prefix = Emb::app(prefix, a.clone());
        let bound = cx.g.add_ord(&Ord::app(prefix.clone(), crit.clone()));
        if !cx.g.le(th, bound) {
            return Err(format!(
                "level not shown below `{}` (argument {})",
                Ord::app(prefix.clone(), crit.clone()),
                i + 1
            ));
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------

fn apply_lemma(
    mut cx: Ctx,
    sides: (C, C, Option<C>),
    inp: &StepInput<'_>,
    lemma: &Lemma,
) -> Result<(), String> {
    for (v, ordinal) in lemma.goal.vars().into_iter().chain(lemma.hyps.iter().flat_map(|h| h.vars())) {
        let bound = if ordinal { inp.with.ord(&v).is_some() } else { inp.with.emb(&v).is_some() };
        if !bound {
            return Err(format!("lemma variable `{v}` is not instantiated"));
        }
    }
    for h in &lemma.hyps {
        let h = h.subst(inp.with);
        let s = cx.g.add_relation(&h);
        cx.g.rebuild();
        if !cx.holds(s, &h) {
            return Err(format!("hypothesis `{h}` is not among the cited premises"));
        }
    }
    let goal = lemma.goal.subst(inp.with);
    assume(&mut cx.g, &mut cx.equivs, &goal);
    cx.g.rebuild();
    if cx.holds(sides, inp.conclusion) {
        Ok(())
    } else {
        Err(format!("conclusion does not follow from `{goal}`"))
    }
}
