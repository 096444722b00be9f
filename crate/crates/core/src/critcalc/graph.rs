//! Hash-consed congruence graph over ordinal and embedding expressions, with
//! `<`/`≤` edges between classes.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use super::expr::{Emb, Ord, OrdConst, Relation};

pub(crate) type C = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    OC(OrdConst),
    OV(Arc<str>),
    OCrit(C),
    OApp(C, C),
    OSup(C, C),
    EId,
    EJ,
    EV(Arc<str>),
    EApp(C, C),
    EComp(C, C),
}

impl Node {
    fn map(&self, f: impl Fn(C) -> C) -> Node {
        match self {
            Node::OCrit(a) => Node::OCrit(f(*a)),
            Node::OApp(a, b) => Node::OApp(f(*a), f(*b)),
            Node::OSup(a, b) => Node::OSup(f(*a), f(*b)),
            Node::EApp(a, b) => Node::EApp(f(*a), f(*b)),
            Node::EComp(a, b) => Node::EComp(f(*a), f(*b)),
            n => n.clone(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Graph {
    nodes: Vec<Node>,
    parent: Vec<C>,
    memo: HashMap<Node, C>,
    /// `(from, to, strict)` between node ids; resolved through `find`.
    edges: Vec<(C, C, bool)>,
    dirty: bool,
}

impl Graph {
    pub(crate) fn find(&self, mut a: C) -> C {
        while self.parent[a as usize] != a {
            a = self.parent[a as usize];
        }
        a
    }

    fn canon(&self, n: &Node) -> Node {
        n.map(|c| self.find(c))
    }

    pub(crate) fn mk(&mut self, n: Node) -> C {
        if self.dirty {
            self.rebuild();
        }
        let n = self.canon(&n);
        if let Some(&c) = self.memo.get(&n) {
            return self.find(c);
        }
        let id = self.nodes.len() as C;
        self.nodes.push(n.clone());
        self.parent.push(id);
        self.memo.insert(n, id);
        id
    }

    pub(crate) fn add_emb(&mut self, e: &Emb) -> C {
        let n = match e {
            Emb::Id => Node::EId,
            Emb::J => Node::EJ,
            Emb::Var(v) => Node::EV(v.clone()),
            Emb::App(a, b) => {
                let (a, b) = (self.add_emb(a), self.add_emb(b));
                Node::EApp(a, b)
            }
            Emb::Comp(a, b) => {
                let (a, b) = (self.add_emb(a), self.add_emb(b));
                Node::EComp(a, b)
            }
        };
        self.mk(n)
    }

    pub(crate) fn add_ord(&mut self, o: &Ord) -> C {
        let n = match o {
            Ord::Const(c) => Node::OC(*c),
            Ord::Var(v) => Node::OV(v.clone()),
            Ord::Crit(e) => Node::OCrit(self.add_emb(e)),
            Ord::App(e, o) => {
                let e = self.add_emb(e);
                Node::OApp(e, self.add_ord(o))
            }
            Ord::Sup(e, o) => {
                let e = self.add_emb(e);
                Node::OSup(e, self.add_ord(o))
            }
        };
        self.mk(n)
    }

    /// Adds every expression of `r`; returns the two sides (and the level of
    /// an equivalence).
    pub(crate) fn add_relation(&mut self, r: &Relation) -> (C, C, Option<C>) {
        match r {
            Relation::EqO(a, b) | Relation::LtO(a, b) | Relation::LeO(a, b) => {
                (self.add_ord(a), self.add_ord(b), None)
            }
            Relation::EquivAt(e, f, l) => {
                let (e, f) = (self.add_emb(e), self.add_emb(f));
                (e, f, Some(self.add_ord(l)))
            }
            Relation::EqE(e, f) => (self.add_emb(e), self.add_emb(f), None),
        }
    }

    pub(crate) fn union(&mut self, a: C, b: C) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi as usize] = lo;
        self.dirty = true;
        true
    }

    /// Restores congruence: equal children make equal parents.
    pub(crate) fn rebuild(&mut self) {
        self.dirty = false;
        loop {
            let mut memo: HashMap<Node, C> = HashMap::with_capacity(self.nodes.len());
            let mut merges = Vec::new();
            for i in 0..self.nodes.len() {
                let n = self.canon(&self.nodes[i]);
                match memo.get(&n) {
                    Some(&j) if self.find(j) != self.find(i as C) => merges.push((i as C, j)),
                    Some(_) => {}
                    None => {
                        memo.insert(n, i as C);
                    }
                }
            }
            if merges.is_empty() {
                self.memo = memo;
                return;
            }
            for (a, b) in merges {
                self.union(a, b);
            }
            self.dirty = false;
        }
    }

    pub(crate) fn same(&mut self, a: C, b: C) -> bool {
        if self.dirty {
            self.rebuild();
        }
        self.find(a) == self.find(b)
    }

    pub(crate) fn add_edge(&mut self, a: C, b: C, strict: bool) {
        if !self.edges.contains(&(a, b, strict)) {
            self.edges.push((a, b, strict));
        }
    }

    /// Classes reachable from `a` along `≤`/`<` edges; the flag records a
    /// strict edge on some path. `a` itself maps to `false` unless it lies
    /// on a strict cycle.
    pub(crate) fn reach(&mut self, a: C) -> HashMap<C, bool> {
        if self.dirty {
            self.rebuild();
        }
        let adj = self.adjacency();
        let mut best: HashMap<C, bool> = HashMap::new();
        let mut queue = VecDeque::from([(self.find(a), false)]);
        while let Some((u, s)) = queue.pop_front() {
            match best.get(&u) {
                Some(&old) if old || !s => continue,
                _ => {}
            }
            best.insert(u, s);
            for &(v, st) in adj.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
                queue.push_back((v, s || st));
            }
        }
        best
    }

    fn adjacency(&self) -> HashMap<C, Vec<(C, bool)>> {
        let mut adj: HashMap<C, Vec<(C, bool)>> = HashMap::new();
        for &(u, v, s) in &self.edges {
            adj.entry(self.find(u)).or_default().push((self.find(v), s));
        }
        adj
    }

    /// `Some(true)`: a strict path `a → b`; `Some(false)`: a non-strict
    /// path or the same class; `None`: no path.
    pub(crate) fn path(&mut self, a: C, b: C) -> Option<bool> {
        let r = self.reach(a);
        r.get(&self.find(b)).copied()
    }

    pub(crate) fn lt(&mut self, a: C, b: C) -> bool {
        self.path(a, b) == Some(true)
    }

    pub(crate) fn le(&mut self, a: C, b: C) -> bool {
        self.path(a, b).is_some()
    }

    /// Some class is strictly below itself: a strict edge inside a strongly
    /// connected component.
    pub(crate) fn has_strict_cycle(&mut self) -> bool {
        if self.dirty {
            self.rebuild();
        }
        let adj = self.adjacency();
        let comp = scc(&adj);
        self.edges
            .iter()
            .any(|&(u, v, s)| s && comp.get(&self.find(u)) == comp.get(&self.find(v)))
    }

    /// Live node ids with their canonical form, grouped by class.
    pub(crate) fn snapshot(&mut self) -> HashMap<C, Vec<Node>> {
        if self.dirty {
            self.rebuild();
        }
        let mut out: HashMap<C, Vec<Node>> = HashMap::new();
        for i in 0..self.nodes.len() {
            let n = self.canon(&self.nodes[i]);
            let c = self.find(i as C);
            let v = out.entry(c).or_default();
            if !v.contains(&n) {
                v.push(n);
            }
        }
        out
    }
}

/// Tarjan's algorithm, iterative; maps each vertex to its component.
fn scc(adj: &HashMap<C, Vec<(C, bool)>>) -> HashMap<C, usize> {
    let mut verts: Vec<C> = adj.keys().copied().collect();
    verts.extend(adj.values().flatten().map(|&(v, _)| v));
    verts.sort_unstable();
    verts.dedup();
    let mut index: HashMap<C, usize> = HashMap::new();
    let mut low: HashMap<C, usize> = HashMap::new();
    let mut on_stack: HashMap<C, bool> = HashMap::new();
    let mut stack = Vec::new();
    let mut comp = HashMap::new();
    let (mut next, mut ncomp) = (0, 0);
    for &root in &verts {
        if index.contains_key(&root) {
            continue;
        }
        let mut work = vec![(root, 0usize)];
        while let Some(&mut (v, ref mut i)) = work.last_mut() {
            if *i == 0 {
                index.insert(v, next);
                low.insert(v, next);
                next += 1;
                stack.push(v);
                on_stack.insert(v, true);
            }
            let succ = adj.get(&v).map(Vec::as_slice).unwrap_or(&[]);
            if let Some(&(w, _)) = succ.get(*i) {
                *i += 1;
                if !index.contains_key(&w) {
                    work.push((w, 0));
                } else if on_stack.get(&w) == Some(&true) {
                    let lw = index[&w].min(low[&v]);
                    low.insert(v, lw);
                }
                continue;
            }
            work.pop();
            if let Some(&(p, _)) = work.last() {
                let lp = low[&p].min(low[&v]);
                low.insert(p, lp);
            }
            if low[&v] == index[&v] {
                while let Some(w) = stack.pop() {
                    on_stack.insert(w, false);
                    comp.insert(w, ncomp);
                    if w == v {
                        break;
                    }
                }
                ncomp += 1;
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::critcalc::expr::OrdConst::*;

    #[test]
    fn congruence_propagates_upwards() {
        let mut g = Graph::default();
        let a = g.add_ord(&Ord::app(Emb::J, Ord::c(Kappa1)));
        let b = g.add_ord(&Ord::app(Emb::J, Ord::app(Emb::J, Ord::c(Kappa0))));
        let k1 = g.add_ord(&Ord::c(Kappa1));
        let jk0 = g.add_ord(&Ord::app(Emb::J, Ord::c(Kappa0)));
        assert!(!g.same(a, b));
        g.union(k1, jk0);
        assert!(g.same(a, b));
    }

    #[test]
    fn strict_paths_and_cycles() {
        let mut g = Graph::default();
        let [x, y, z] = [Kappa0, Kappa1, Kappa2].map(|c| g.add_ord(&Ord::c(c)));
        g.add_edge(x, y, false);
        g.add_edge(y, z, true);
        assert!(g.lt(x, z) && g.le(x, y) && !g.lt(x, y) && !g.le(z, x));
        assert!(!g.has_strict_cycle());
        g.add_edge(z, x, false);
        assert!(g.has_strict_cycle());
    }
}
