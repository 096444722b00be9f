//! Ordinal and embedding expressions of the critical-point calculus, with a
//! parser and a printer whose output reparses to the same tree.

use std::fmt;
use std::sync::Arc;

use crate::term::{parse_j_index, NameTable, Term};

use super::CalcError;

/// Embedding expressions. Built only through the smart constructors, which
/// eliminate `id` eagerly: `id(x) = x`, `x(id) = id`, `id ∘ x = x ∘ id = x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Emb {
    Id,
    J,
    Var(Arc<str>),
    App(Arc<Emb>, Arc<Emb>),
    Comp(Arc<Emb>, Arc<Emb>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrdConst {
    Kappa0,
    Kappa1,
    Kappa2,
    Kappa2_5,
    Kappa3,
    Kappa4,
    Sigma1,
    Sigma2,
    Mu,
    Nu,
    Xi,
}

impl OrdConst {
    pub const ALL: [OrdConst; 11] = [
        OrdConst::Kappa0,
        OrdConst::Kappa1,
        OrdConst::Kappa2,
        OrdConst::Kappa2_5,
        OrdConst::Kappa3,
        OrdConst::Kappa4,
        OrdConst::Sigma1,
        OrdConst::Sigma2,
        OrdConst::Mu,
        OrdConst::Nu,
        OrdConst::Xi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OrdConst::Kappa0 => "kappa0",
            OrdConst::Kappa1 => "kappa1",
            OrdConst::Kappa2 => "kappa2",
            OrdConst::Kappa2_5 => "kappa2_5",
            OrdConst::Kappa3 => "kappa3",
            OrdConst::Kappa4 => "kappa4",
            OrdConst::Sigma1 => "sigma1",
            OrdConst::Sigma2 => "sigma2",
            OrdConst::Mu => "mu",
            OrdConst::Nu => "nu",
            OrdConst::Xi => "xi",
        }
    }

    pub fn from_name(s: &str) -> Option<OrdConst> {
        OrdConst::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ord {
    Const(OrdConst),
    Var(Arc<str>),
    Crit(Emb),
    App(Emb, Arc<Ord>),
    /// `e(<α)`: the least ordinal above every `e(β)`, `β < α`.
    Sup(Emb, Arc<Ord>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    EqO(Ord, Ord),
    LtO(Ord, Ord),
    LeO(Ord, Ord),
    /// `e ≡_β f`
    EquivAt(Emb, Emb, Ord),
    EqE(Emb, Emb),
}

/// Ordinal variable names; every other free identifier is an embedding
/// variable.
const ORD_VARS: [&str; 6] = ["alpha", "beta", "gamma", "delta", "theta", "rho"];

pub(crate) fn is_ord_var(s: &str) -> bool {
    ORD_VARS
        .iter()
        .any(|v| s.strip_prefix(v).is_some_and(|r| r.bytes().all(|b| b.is_ascii_digit())))
}

impl Emb {
    pub fn app(a: Emb, b: Emb) -> Emb {
        match (a, b) {
            (Emb::Id, b) => b,
            (_, Emb::Id) => Emb::Id,
            (a, b) => Emb::App(Arc::new(a), Arc::new(b)),
        }
    }

    pub fn comp(a: Emb, b: Emb) -> Emb {
        match (a, b) {
            (Emb::Id, b) => b,
            (a, Emb::Id) => a,
            (a, b) => Emb::Comp(Arc::new(a), Arc::new(b)),
        }
    }

    pub fn var(name: &str) -> Emb {
        Emb::Var(name.into())
    }

    /// `j_n`, left-nested.
    pub fn j(n: u64) -> Emb {
        let mut e = Emb::J;
        for _ in 1..n {
            e = Emb::app(e, Emb::J);
        }
        e
    }

    pub fn from_term(t: &Term) -> Emb {
        match t {
            Term::Generator => Emb::J,
            Term::Apply(a, b) => Emb::app(Emb::from_term(a), Emb::from_term(b)),
            Term::Compose(a, b) => Emb::comp(Emb::from_term(a), Emb::from_term(b)),
        }
    }

    /// `None` when the expression mentions `id` or a variable.
    pub fn to_term(&self) -> Option<Term> {
        Some(match self {
            Emb::J => Term::Generator,
            Emb::App(a, b) => Term::apply(a.to_term()?, b.to_term()?),
            Emb::Comp(a, b) => Term::compose(a.to_term()?, b.to_term()?),
            Emb::Id | Emb::Var(_) => return None,
        })
    }

    pub fn j_index(&self) -> Option<u64> {
        match self {
            Emb::J => Some(1),
            Emb::App(a, b) if **b == Emb::J => a.j_index().map(|n| n + 1),
            _ => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Emb::Var(_) => false,
            Emb::Id | Emb::J => true,
            Emb::App(a, b) | Emb::Comp(a, b) => a.is_ground() && b.is_ground(),
        }
    }

    /// Left spine of applications: `a b c` ↦ `[a, b, c]`.
    pub fn spine(&self) -> Vec<Emb> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Emb::App(a, b) = cur {
            out.push((**b).clone());
            cur = a;
        }
        out.push(cur.clone());
        out.reverse();
        out
    }

    pub fn subst(&self, s: &Subst) -> Emb {
        match self {
            Emb::Var(v) => s.emb(v).cloned().unwrap_or_else(|| self.clone()),
            Emb::Id | Emb::J => self.clone(),
            Emb::App(a, b) => Emb::app(a.subst(s), b.subst(s)),
            Emb::Comp(a, b) => Emb::comp(a.subst(s), b.subst(s)),
        }
    }

    fn collect_vars(&self, out: &mut Vec<(Arc<str>, bool)>) {
        match self {
            Emb::Var(v) => push_var(out, v, false),
            Emb::Id | Emb::J => {}
            Emb::App(a, b) | Emb::Comp(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

fn push_var(out: &mut Vec<(Arc<str>, bool)>, v: &Arc<str>, ordinal: bool) {
    if !out.iter().any(|(w, _)| w == v) {
        out.push((v.clone(), ordinal));
    }
}

impl Ord {
    pub fn app(e: Emb, o: Ord) -> Ord {
        match e {
            Emb::Id => o,
            e => Ord::App(e, Arc::new(o)),
        }
    }

    pub fn sup(e: Emb, o: Ord) -> Ord {
        match e {
            Emb::Id => o,
            e => Ord::Sup(e, Arc::new(o)),
        }
    }

    pub fn c(c: OrdConst) -> Ord {
        Ord::Const(c)
    }

    /// `κ^n = j_n(κ)`.
    pub fn sup_n(c: OrdConst, n: u64) -> Ord {
        Ord::app(Emb::j(n), Ord::Const(c))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Ord::Const(_) => true,
            Ord::Var(_) => false,
            Ord::Crit(e) => e.is_ground(),
            Ord::App(e, o) | Ord::Sup(e, o) => e.is_ground() && o.is_ground(),
        }
    }

    pub fn subst(&self, s: &Subst) -> Ord {
        match self {
            Ord::Var(v) => s.ord(v).cloned().unwrap_or_else(|| self.clone()),
            Ord::Const(_) => self.clone(),
            Ord::Crit(e) => Ord::Crit(e.subst(s)),
            Ord::App(e, o) => Ord::app(e.subst(s), o.subst(s)),
            Ord::Sup(e, o) => Ord::sup(e.subst(s), o.subst(s)),
        }
    }

    fn collect_vars(&self, out: &mut Vec<(Arc<str>, bool)>) {
        match self {
            Ord::Var(v) => push_var(out, v, true),
            Ord::Const(_) => {}
            Ord::Crit(e) => e.collect_vars(out),
            Ord::App(e, o) | Ord::Sup(e, o) => {
                e.collect_vars(out);
                o.collect_vars(out);
            }
        }
    }
}

impl Relation {
    pub fn is_ground(&self) -> bool {
        match self {
            Relation::EqO(a, b) | Relation::LtO(a, b) | Relation::LeO(a, b) => {
                a.is_ground() && b.is_ground()
            }
            Relation::EquivAt(e, f, b) => e.is_ground() && f.is_ground() && b.is_ground(),
            Relation::EqE(e, f) => e.is_ground() && f.is_ground(),
        }
    }

    pub fn subst(&self, s: &Subst) -> Relation {
        match self {
            Relation::EqO(a, b) => Relation::EqO(a.subst(s), b.subst(s)),
            Relation::LtO(a, b) => Relation::LtO(a.subst(s), b.subst(s)),
            Relation::LeO(a, b) => Relation::LeO(a.subst(s), b.subst(s)),
            Relation::EquivAt(e, f, b) => Relation::EquivAt(e.subst(s), f.subst(s), b.subst(s)),
            Relation::EqE(e, f) => Relation::EqE(e.subst(s), f.subst(s)),
        }
    }

    /// Free variables in order of first occurrence; `true` marks ordinals.
    pub fn vars(&self) -> Vec<(Arc<str>, bool)> {
        let mut out = Vec::new();
        match self {
            Relation::EqO(a, b) | Relation::LtO(a, b) | Relation::LeO(a, b) => {
                a.collect_vars(&mut out);
                b.collect_vars(&mut out);
            }
            Relation::EquivAt(e, f, b) => {
                e.collect_vars(&mut out);
                f.collect_vars(&mut out);
                b.collect_vars(&mut out);
            }
            Relation::EqE(e, f) => {
                e.collect_vars(&mut out);
                f.collect_vars(&mut out);
            }
        }
        out
    }

    pub fn ordinals(&self) -> Vec<&Ord> {
        match self {
            Relation::EqO(a, b) | Relation::LtO(a, b) | Relation::LeO(a, b) => vec![a, b],
            Relation::EquivAt(_, _, b) => vec![b],
            Relation::EqE(..) => vec![],
        }
    }
}

/// Instantiation of embedding and ordinal variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subst {
    embs: Vec<(Arc<str>, Emb)>,
    ords: Vec<(Arc<str>, Ord)>,
}

impl Subst {
    pub fn bind_emb(&mut self, v: &str, e: Emb) {
        self.embs.retain(|(w, _)| &**w != v);
        self.embs.push((v.into(), e));
    }

    pub fn bind_ord(&mut self, v: &str, o: Ord) {
        self.ords.retain(|(w, _)| &**w != v);
        self.ords.push((v.into(), o));
    }

    pub fn emb(&self, v: &str) -> Option<&Emb> {
        self.embs.iter().find(|(w, _)| &**w == v).map(|(_, e)| e)
    }

    pub fn ord(&self, v: &str) -> Option<&Ord> {
        self.ords.iter().find(|(w, _)| &**w == v).map(|(_, o)| o)
    }

    pub fn is_empty(&self) -> bool {
        self.embs.is_empty() && self.ords.is_empty()
    }

    pub fn embs(&self) -> impl Iterator<Item = &Emb> {
        self.embs.iter().map(|(_, e)| e)
    }

    pub fn ords(&self) -> impl Iterator<Item = &Ord> {
        self.ords.iter().map(|(_, o)| o)
    }
}

// ---------------------------------------------------------------------------
// Printing

impl fmt::Display for Emb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.j_index() {
            return if n == 1 { f.write_str("j") } else { write!(f, "j{n}") };
        }
        match self {
            Emb::Id => f.write_str("id"),
            Emb::J => f.write_str("j"),
            Emb::Var(v) => f.write_str(v),
            Emb::App(a, b) => {
                write_head(f, a)?;
                write!(f, "({b})")
            }
            Emb::Comp(a, b) => {
                write!(f, "{a} o ")?;
                if matches!(**b, Emb::Comp(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

fn write_head(f: &mut fmt::Formatter<'_>, e: &Emb) -> fmt::Result {
    if matches!(e, Emb::Comp(..)) {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Ord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ord::Const(c) => f.write_str(c.name()),
            Ord::Var(v) => f.write_str(v),
            Ord::Crit(e) => write!(f, "crit({e})"),
            Ord::App(e, o) => match (e.j_index(), &**o) {
                (Some(n), Ord::Const(c)) if n > 1 => write!(f, "{}^{n}", c.name()),
                _ => {
                    write_head(f, e)?;
                    write!(f, "({o})")
                }
            },
            Ord::Sup(e, o) => {
                write_head(f, e)?;
                write!(f, "(<{o})")
            }
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::EqO(a, b) => write!(f, "{a} = {b}"),
            Relation::LtO(a, b) => write!(f, "{a} < {b}"),
            Relation::LeO(a, b) => write!(f, "{a} <= {b}"),
            Relation::EquivAt(e, g, b) => write!(f, "{e} ~[{b}] {g}"),
            Relation::EqE(e, g) => write!(f, "{e} = {g}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Open,
    Close,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Tilde,
    LBrack,
    RBrack,
    Caret,
    Circ,
}

fn lex(text: &str) -> Result<Vec<Tok>, String> {
    let cs: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        let two = |n: char| cs.get(i + 1) == Some(&n);
        match c {
            _ if c.is_whitespace() => {}
            '(' => out.push(Tok::Open),
            ')' => out.push(Tok::Close),
            '[' => out.push(Tok::LBrack),
            ']' => out.push(Tok::RBrack),
            '~' => out.push(Tok::Tilde),
            '^' => out.push(Tok::Caret),
            '=' => out.push(Tok::Eq),
            '∘' => out.push(Tok::Circ),
            '<' if two('=') => {
                out.push(Tok::Le);
                i += 1;
            }
            '>' if two('=') => {
                out.push(Tok::Ge);
                i += 1;
            }
            '<' => out.push(Tok::Lt),
            '>' => out.push(Tok::Gt),
            _ if c.is_ascii_digit() => {
                let start = i;
                while cs.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                    i += 1;
                }
                let s: String = cs[start..=i].iter().collect();
                out.push(Tok::Num(s.parse().map_err(|_| format!("bad number `{s}`"))?));
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while cs
                    .get(i + 1)
                    .is_some_and(|d| d.is_ascii_alphanumeric() || *d == '_' || *d == '\'')
                {
                    i += 1;
                }
                let s: String = cs[start..=i].iter().collect();
                push_ident(&mut out, s);
            }
            _ => return Err(format!("unexpected character `{c}`")),
        }
        i += 1;
    }
    Ok(out)
}

/// `o` is composition; runs like `jj` or `j9j15` split into generators.
fn push_ident(out: &mut Vec<Tok>, s: String) {
    if s == "o" {
        out.push(Tok::Circ);
        return;
    }
    if let Some(parts) = split_js(&s) {
        out.extend(parts.into_iter().map(Tok::Ident));
    } else {
        out.push(Tok::Ident(s));
    }
}

fn split_js(s: &str) -> Option<Vec<String>> {
    let b = s.as_bytes();
    let mut parts = Vec::new();
    let mut i = 0;
    while i < b.len() {
        if b[i] != b'j' {
            return None;
        }
        let mut k = i + 1;
        while k < b.len() && b[k].is_ascii_digit() {
            k += 1;
        }
        let part = &s[i..k];
        parse_j_index(part)?;
        parts.push(part.to_string());
        i = k;
    }
    Some(parts)
}

pub(crate) struct Parser<'a> {
    names: &'a NameTable,
}

type PResult<T> = Result<T, String>;

impl<'a> Parser<'a> {
    pub(crate) fn new(names: &'a NameTable) -> Self {
        Parser { names }
    }

    pub(crate) fn relation(&self, text: &str) -> PResult<Relation> {
        let toks = lex(text)?;
        if let Some(t) = top_level(&toks, |t| *t == Tok::Tilde) {
            let lhs = self.emb(&toks[..t])?;
            let rest = &toks[t + 1..];
            if rest.first() != Some(&Tok::LBrack) {
                return Err("expected `[` after `~`".into());
            }
            let close = rest
                .iter()
                .position(|t| *t == Tok::RBrack)
                .ok_or("missing `]`")?;
            let level = self.ord(&rest[1..close])?;
            let rhs = self.emb(&rest[close + 1..])?;
            return Ok(Relation::EquivAt(lhs, rhs, level));
        }
        let op = top_level(&toks, |t| {
            matches!(t, Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge | Tok::Eq)
        })
        .ok_or("expected a relation")?;
        let (l, r) = (&toks[..op], &toks[op + 1..]);
        let ords = self.ord(l).and_then(|a| Ok((a, self.ord(r)?)));
        match (&toks[op], ords) {
            (Tok::Eq, Ok((a, b))) => Ok(Relation::EqO(a, b)),
            (Tok::Lt, Ok((a, b))) => Ok(Relation::LtO(a, b)),
            (Tok::Le, Ok((a, b))) => Ok(Relation::LeO(a, b)),
            (Tok::Gt, Ok((a, b))) => Ok(Relation::LtO(b, a)),
            (Tok::Ge, Ok((a, b))) => Ok(Relation::LeO(b, a)),
            (Tok::Eq, Err(_)) => Ok(Relation::EqE(self.emb(l)?, self.emb(r)?)),
            (_, Err(e)) => Err(e),
            _ => unreachable!("operator token"),
        }
    }

    pub(crate) fn ord_text(&self, text: &str) -> PResult<Ord> {
        self.ord(&lex(text)?)
    }

    pub(crate) fn emb_text(&self, text: &str) -> PResult<Emb> {
        self.emb(&lex(text)?)
    }

    fn ord(&self, toks: &[Tok]) -> PResult<Ord> {
        match toks {
            [] => Err("empty ordinal".into()),
            [Tok::Ident(s)] => {
                if let Some(c) = OrdConst::from_name(s) {
                    Ok(Ord::Const(c))
                } else if is_ord_var(s) {
                    Ok(Ord::Var(s.as_str().into()))
                } else {
                    Err(format!("`{s}` is not an ordinal"))
                }
            }
            [Tok::Ident(s), Tok::Caret, Tok::Num(n)] => {
                let c = OrdConst::from_name(s).ok_or_else(|| format!("`{s}` is not a constant"))?;
                if *n == 0 {
                    return Err("superscript must be positive".into());
                }
                Ok(Ord::sup_n(c, *n))
            }
            [Tok::Ident(s), Tok::Open, inner @ .., Tok::Close]
                if s == "crit" && group_end(toks, 1) == Some(toks.len() - 1) =>
            {
                Ok(Ord::Crit(self.emb(inner)?))
            }
            [.., Tok::Close] => {
                let open = group_start(toks).ok_or("unbalanced parentheses")?;
                let inner = &toks[open + 1..toks.len() - 1];
                let (sup, inner) = match inner.first() {
                    Some(Tok::Lt) => (true, &inner[1..]),
                    _ => (false, inner),
                };
                let arg = self.ord(inner)?;
                if open == 0 {
                    return if sup { Err("`(<` needs an embedding".into()) } else { Ok(arg) };
                }
                let head = self.emb(&toks[..open])?;
                Ok(if sup { Ord::sup(head, arg) } else { Ord::app(head, arg) })
            }
            _ => Err("not an ordinal expression".into()),
        }
    }

    fn emb(&self, toks: &[Tok]) -> PResult<Emb> {
        if toks.is_empty() {
            return Err("empty embedding".into());
        }
        let mut parts = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        for (i, t) in toks.iter().enumerate() {
            match t {
                Tok::Open => depth += 1,
                Tok::Close => depth -= 1,
                Tok::Circ if depth == 0 => {
                    parts.push(&toks[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        parts.push(&toks[start..]);
        let mut it = parts.into_iter();
        let mut acc = self.chain(it.next().unwrap_or(&[]))?;
        for p in it {
            acc = Emb::comp(acc, self.chain(p)?);
        }
        Ok(acc)
    }

    fn chain(&self, toks: &[Tok]) -> PResult<Emb> {
        let mut acc: Option<Emb> = None;
        let mut i = 0;
        while i < toks.len() {
            let (atom, next) = match &toks[i] {
                Tok::Open => {
                    let end = group_end(toks, i).ok_or("unbalanced parentheses")?;
                    (self.emb(&toks[i + 1..end])?, end + 1)
                }
                Tok::Ident(s) => (self.atom(s)?, i + 1),
                t => return Err(format!("unexpected {t:?} in embedding")),
            };
            acc = Some(match acc {
                None => atom,
                Some(a) => Emb::app(a, atom),
            });
            i = next;
        }
        acc.ok_or_else(|| "empty embedding".into())
    }

    fn atom(&self, s: &str) -> PResult<Emb> {
        if let Some(n) = parse_j_index(s) {
            return Ok(Emb::j(n));
        }
        if s == "id" {
            return Ok(Emb::Id);
        }
        if let Some(t) = self.names.get(s) {
            return Ok(Emb::from_term(t));
        }
        if s == "crit" || OrdConst::from_name(s).is_some() || is_ord_var(s) {
            return Err(format!("`{s}` is not an embedding"));
        }
        Ok(Emb::var(s))
    }
}

fn top_level(toks: &[Tok], pred: impl Fn(&Tok) -> bool) -> Option<usize> {
    let mut depth = 0i32;
    for (i, t) in toks.iter().enumerate() {
        match t {
            Tok::Open | Tok::LBrack => depth += 1,
            Tok::Close | Tok::RBrack => depth -= 1,
            _ if depth == 0 && pred(t) => return Some(i),
            _ => {}
        }
    }
    None
}

fn group_end(toks: &[Tok], open: usize) -> Option<usize> {
    let mut depth = 0i32;
    for (i, t) in toks.iter().enumerate().skip(open) {
        match t {
            Tok::Open => depth += 1,
            Tok::Close => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// Start of the parenthesised group that ends the token slice.
fn group_start(toks: &[Tok]) -> Option<usize> {
    let mut depth = 0i32;
    for i in (0..toks.len()).rev() {
        match toks[i] {
            Tok::Close => depth += 1,
            Tok::Open => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

pub fn parse_relation(text: &str, names: &NameTable) -> Result<Relation, CalcError> {
    Parser::new(names)
        .relation(text)
        .map_err(|msg| CalcError::Parse { line: 0, msg })
}

pub fn parse_ord(text: &str, names: &NameTable) -> Result<Ord, CalcError> {
    Parser::new(names)
        .ord_text(text)
        .map_err(|msg| CalcError::Parse { line: 0, msg })
}

pub fn parse_emb(text: &str, names: &NameTable) -> Result<Emb, CalcError> {
    Parser::new(names)
        .emb_text(text)
        .map_err(|msg| CalcError::Parse { line: 0, msg })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(s: &str) -> Relation {
        parse_relation(s, &NameTable::prelude()).unwrap()
    }

    #[test]
    fn juxtaposition_and_ordinal_argument() {
        let r = rel("j9j15(j9j15(kappa2_5^9)) < kappa4");
        let Relation::LtO(Ord::App(e, inner), _) = &r else { panic!("{r:?}") };
        assert_eq!(*e, Emb::app(Emb::j(9), Emb::j(15)));
        assert!(matches!(&**inner, Ord::App(..)));
        assert_eq!(rel(&r.to_string()), r);
    }

    #[test]
    fn sup_below_and_composition() {
        let r = rel("(j o j)(<kappa1) < kappa2_5");
        let Relation::LtO(Ord::Sup(e, _), _) = &r else { panic!() };
        assert_eq!(*e, Emb::comp(Emb::J, Emb::J));
        assert_eq!(r.to_string(), "(j o j)(<kappa1) < kappa2_5");
    }

    #[test]
    fn id_is_eliminated() {
        assert_eq!(rel("id(j) = j"), Relation::EqE(Emb::J, Emb::J));
        assert_eq!(rel("id(kappa1) = kappa1"), rel("kappa1 = kappa1"));
        assert_eq!(rel("j o id = j(id) o j"), Relation::EqE(Emb::J, Emb::J));
    }

    #[test]
    fn names_expand() {
        assert_eq!(rel("k(kappa1) = kappa2"), rel("j10(kappa1) = kappa2"));
        assert_eq!(rel("j11 = j8(j)(j)(j)"), Relation::EqE(Emb::j(11), Emb::j(11)));
        assert_eq!(rel("jjj(kappa1) = kappa2_5"), rel("j3(kappa1) = kappa2_5"));
    }

    #[test]
    fn variables_and_equivalence() {
        let r = rel("e(j)(j)(j) ~[e(j)(j)(kappa2)] e(j3)");
        let vars = r.vars();
        assert_eq!(vars.len(), 1);
        assert!(!vars[0].1);
        let r = rel("beta < e(kappa1)");
        assert_eq!(r.vars().len(), 2);
        assert_eq!(rel(&r.to_string()), r);
    }

    #[test]
    fn flipped_relations() {
        assert_eq!(rel("kappa2 > kappa1"), rel("kappa1 < kappa2"));
        assert_eq!(rel("crit(e) >= kappa2"), rel("kappa2 <= crit(e)"));
    }
}
