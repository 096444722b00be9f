//! Finite left-distributive tables `A_n` on `{1, .., 2^n}`.
//!
//! `A_n` is the unique operation with `a * 1 = a + 1 (mod 2^n)` and
//! `a * (b + 1) = (a * b) * (a + 1)`. The row of `2^n` is the identity.
//! Rows are stored zero-based as `u16`, which covers every `n <= 16`; all
//! public interfaces use the one-based elements.
//!
//! Terms in one generator are evaluated homomorphically with `j ↦ 1`, and the
//! critical point of a term is read off from the least table in which its
//! image is not the top element.

use std::fmt;
use std::io::{Read, Write};
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::term::Term;

/// Largest table index the storage format supports.
pub const HARD_CAP: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaverError {
    #[error("table index {n} exceeds the configured cap {cap}")]
    CapExceeded { n: u32, cap: u32 },
    #[error("table A_{n} needs {bytes} bytes, over the budget of {budget}")]
    BudgetExceeded { n: u32, bytes: u64, budget: u64 },
    #[error("element {elem} is outside 1..={size}")]
    OutOfRange { elem: u32, size: u32 },
    #[error("composition {a} o {b} in A_{n}: row {x} disagrees with c -> a*(b*c) at c = {c}")]
    RowMismatch { n: u32, a: u32, b: u32, x: u32, c: u32 },
    #[error("term {term}: top image in A_{top} but not in A_{lower}")]
    MonotonicityViolation { term: String, lower: u32, top: u32 },
    #[error("cache file: {0}")]
    Cache(String),
}

/// Sizing policy for table construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableConfig {
    /// Tables up to this index are fully materialized at build time.
    pub eager_cap: u32,
    /// Largest index that may be built at all.
    pub max_n: u32,
    /// Memory budget in bytes for the row storage of a single table.
    pub budget_bytes: u64,
}

impl Default for TableConfig {
    fn default() -> Self {
        TableConfig {
            eager_cap: 10,
            max_n: 12,
            budget_bytes: 64 << 20,
        }
    }
}

impl TableConfig {
    /// Unlocks `n` up to 16, subject to `budget_bytes`.
    pub fn stretch(budget_bytes: u64) -> Self {
        TableConfig {
            max_n: HARD_CAP,
            budget_bytes,
            ..Self::default()
        }
    }
}

pub struct LaverTable {
    n: u32,
    size: u32,
    rows: Vec<OnceLock<Box<[u16]>>>,
}

impl fmt::Debug for LaverTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ready = self.rows.iter().filter(|r| r.get().is_some()).count();
        f.debug_struct("LaverTable")
            .field("n", &self.n)
            .field("rows_materialized", &ready)
            .finish()
    }
}

pub fn build_table(n: u32, cfg: &TableConfig) -> Result<LaverTable, LaverError> {
    let cap = cfg.max_n.min(HARD_CAP);
    if n > cap {
        return Err(LaverError::CapExceeded { n, cap });
    }
    let size = 1u32 << n;
    let bytes = 2 * (size as u64) * (size as u64);
    if n > cfg.eager_cap && bytes > cfg.budget_bytes {
        return Err(LaverError::BudgetExceeded {
            n,
            bytes,
            budget: cfg.budget_bytes,
        });
    }
    let table = LaverTable {
        n,
        size,
        rows: (0..size).map(|_| OnceLock::new()).collect(),
    };
    if n <= cfg.eager_cap {
        table.materialize_all();
    }
    Ok(table)
}

impl LaverTable {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    fn materialize_all(&self) {
        for a in (1..=self.size).rev() {
            self.row0(a - 1);
        }
    }

    /// Zero-based row of the one-based element `a0 + 1`.
    fn row0(&self, a0: u32) -> &[u16] {
        if let Some(r) = self.rows[a0 as usize].get() {
            return r;
        }
        self.compute_row(a0);
        self.rows[a0 as usize].get().expect("row computed")
    }

    // Row `a` only depends on rows `a * b > a`, so a worklist of partially
    // filled rows terminates. Results are independent of evaluation order.
    fn compute_row(&self, target: u32) {
        let size = self.size;
        let top = size - 1;
        let mut stack: Vec<(u32, Vec<u16>)> = vec![(target, Vec::with_capacity(size as usize))];
        while let Some((a0, mut row)) = stack.pop() {
            if self.rows[a0 as usize].get().is_some() {
                continue;
            }
            if a0 == top {
                let id: Box<[u16]> = (0..size).map(|b| b as u16).collect();
                let _ = self.rows[a0 as usize].set(id);
                continue;
            }
            let succ = a0 + 1;
            if row.is_empty() {
                row.push(succ as u16);
            }
            let mut blocked = None;
            while (row.len() as u32) < size {
                let prev = *row.last().expect("nonempty") as u32;
                match self.rows[prev as usize].get() {
                    Some(r) => row.push(r[succ as usize]),
                    None => {
                        blocked = Some(prev);
                        break;
                    }
                }
            }
            match blocked {
                Some(dep) => {
                    stack.push((a0, row));
                    stack.push((dep, Vec::with_capacity(size as usize)));
                }
                None => {
                    let _ = self.rows[a0 as usize].set(row.into_boxed_slice());
                }
            }
        }
    }

    fn check(&self, x: u32) -> Result<(), LaverError> {
        if x == 0 || x > self.size {
            Err(LaverError::OutOfRange {
                elem: x,
                size: self.size,
            })
        } else {
            Ok(())
        }
    }

    /// One-based row of `a`.
    pub fn row(&self, a: u32) -> Result<Vec<u32>, LaverError> {
        self.check(a)?;
        Ok(self.row0(a - 1).iter().map(|&v| v as u32 + 1).collect())
    }

    pub fn mult(&self, a: u32, b: u32) -> Result<u32, LaverError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.row0(a - 1)[(b - 1) as usize] as u32 + 1)
    }

    fn succ(&self, x: u32) -> u32 {
        x % self.size + 1
    }

    fn pred(&self, x: u32) -> u32 {
        if x == 1 {
            self.size
        } else {
            x - 1
        }
    }

    /// The element whose row is `c ↦ a * (b * c)`, verified over the full row.
    pub fn compose_elem(&self, a: u32, b: u32) -> Result<u32, LaverError> {
        let x = self.pred(self.mult(a, self.succ(b))?);
        for c in 1..=self.size {
            let lhs = self.mult(x, c)?;
            let rhs = self.mult(a, self.mult(b, c)?)?;
            if lhs != rhs {
                return Err(LaverError::RowMismatch {
                    n: self.n,
                    a,
                    b,
                    x,
                    c,
                });
            }
        }
        Ok(x)
    }

    /// Least period of row `a`; always a power of two dividing `2^n`.
    pub fn row_period(&self, a: u32) -> Result<u32, LaverError> {
        self.check(a)?;
        let row = self.row0(a - 1);
        let mut p = 1usize;
        while p < row.len() {
            if (0..row.len()).all(|i| row[i] == row[(i + p) % row.len()]) {
                return Ok(p as u32);
            }
            p *= 2;
        }
        Ok(row.len() as u32)
    }

    /// Image of a term with `j ↦ 1`.
    pub fn eval(&self, t: &Term) -> Result<u32, LaverError> {
        match t {
            Term::Generator => Ok(self.succ(0)),
            Term::Apply(l, r) => self.mult(self.eval(l)?, self.eval(r)?),
            Term::Compose(l, r) => self.compose_elem(self.eval(l)?, self.eval(r)?),
        }
    }

    /// A fully materialized copy with a single entry overwritten, for fault
    /// injection.
    pub fn corrupted(&self, a: u32, b: u32, value: u32) -> Result<LaverTable, LaverError> {
        self.check(a)?;
        self.check(b)?;
        self.check(value)?;
        self.materialize_all();
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.get().expect("materialized").clone();
                if i as u32 == a - 1 {
                    row[(b - 1) as usize] = (value - 1) as u16;
                }
                OnceLock::from(row)
            })
            .collect();
        Ok(LaverTable {
            n: self.n,
            size: self.size,
            rows,
        })
    }

    /// Writes the binary cache: `LDA1`, little-endian `u64` n, then all rows
    /// as one-based little-endian `u32`.
    pub fn write_cache<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(b"LDA1")?;
        w.write_all(&(self.n as u64).to_le_bytes())?;
        for a in 0..self.size {
            for &v in self.row0(a) {
                w.write_all(&(v as u32 + 1).to_le_bytes())?;
            }
        }
        Ok(())
    }

    /// Reads a cache file and checks it bit-exactly against a fresh build.
    pub fn read_cache<R: Read>(mut r: R, cfg: &TableConfig) -> Result<LaverTable, LaverError> {
        let io = |e: std::io::Error| LaverError::Cache(e.to_string());
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).map_err(io)?;
        if &magic != b"LDA1" {
            return Err(LaverError::Cache("bad magic".into()));
        }
        let mut nb = [0u8; 8];
        r.read_exact(&mut nb).map_err(io)?;
        let n = u64::from_le_bytes(nb);
        if n > HARD_CAP as u64 {
            return Err(LaverError::Cache(format!("n = {n} out of range")));
        }
        let fresh = build_table(n as u32, cfg)?;
        let mut buf = [0u8; 4];
        for a in 1..=fresh.size {
            for (b, &v) in fresh.row0(a - 1).iter().enumerate() {
                r.read_exact(&mut buf).map_err(io)?;
                let got = u32::from_le_bytes(buf);
                if got != v as u32 + 1 {
                    return Err(LaverError::Cache(format!(
                        "entry ({a}, {}) is {got}, expected {}",
                        b + 1,
                        v as u32 + 1
                    )));
                }
            }
        }
        let mut extra = [0u8; 1];
        if r.read(&mut extra).map_err(io)? != 0 {
            return Err(LaverError::Cache("trailing bytes".into()));
        }
        Ok(fresh)
    }
}

/// Reduction of an element of `A_m` (m ≥ n) to `A_n`.
pub fn reduce(x: u32, n: u32) -> u32 {
    (x - 1) % (1u32 << n) + 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LdReport {
    pub n: u32,
    pub exhaustive: bool,
    pub triples_checked: u64,
    /// First failing `(a, b, c)`.
    pub counterexample: Option<(u32, u32, u32)>,
}

impl LdReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn ld_holds(t: &LaverTable, a: u32, b: u32, c: u32) -> bool {
    let m = |x, y| t.mult(x, y).expect("in range");
    m(a, m(b, c)) == m(m(a, b), m(a, c))
}

/// Exhaustive for `n <= 8`, otherwise `samples` seeded random triples.
pub fn check_left_distributivity(t: &LaverTable, samples: u64, seed: u64) -> LdReport {
    let s = t.size();
    if t.n() <= 8 {
        let mut checked = 0;
        for a in 1..=s {
            for b in 1..=s {
                for c in 1..=s {
                    checked += 1;
                    if !ld_holds(t, a, b, c) {
                        return LdReport {
                            n: t.n(),
                            exhaustive: true,
                            triples_checked: checked,
                            counterexample: Some((a, b, c)),
                        };
                    }
                }
            }
        }
        return LdReport {
            n: t.n(),
            exhaustive: true,
            triples_checked: checked,
            counterexample: None,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..samples {
        let (a, b, c) = (rng.gen_range(1..=s), rng.gen_range(1..=s), rng.gen_range(1..=s));
        if !ld_holds(t, a, b, c) {
            return LdReport {
                n: t.n(),
                exhaustive: false,
                triples_checked: i + 1,
                counterexample: Some((a, b, c)),
            };
        }
    }
    LdReport {
        n: t.n(),
        exhaustive: false,
        triples_checked: samples,
        counterexample: None,
    }
}

/// Checks `reduce(a *_{n+1} b) = reduce(a) *_n reduce(b)` for all pairs.
/// Returns the first failing pair of `A_{n+1}` elements.
pub fn check_projection(lower: &LaverTable, upper: &LaverTable) -> Option<(u32, u32)> {
    assert_eq!(upper.n(), lower.n() + 1);
    let n = lower.n();
    for a in 1..=upper.size() {
        for b in 1..=upper.size() {
            let up = reduce(upper.mult(a, b).expect("in range"), n);
            let down = lower
                .mult(reduce(a, n), reduce(b, n))
                .expect("in range");
            if up != down {
                return Some((a, b));
            }
        }
    }
    None
}

/// Critical-point index of a term: `Exactly(k)` means `crit = γ_k`,
/// `AtLeast(b)` means `crit ≥ γ_b` with no decision from the tables consulted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CritIndex {
    Exactly(u32),
    AtLeast(u32),
}

impl CritIndex {
    pub fn exact(self) -> Option<u32> {
        match self {
            CritIndex::Exactly(k) => Some(k),
            CritIndex::AtLeast(_) => None,
        }
    }

    /// Largest `b` with `γ_b` certified as a lower bound.
    pub fn lower_bound(self) -> u32 {
        match self {
            CritIndex::Exactly(k) | CritIndex::AtLeast(k) => k,
        }
    }
}

impl fmt::Display for CritIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CritIndex::Exactly(k) => write!(f, "gamma_{k}"),
            CritIndex::AtLeast(k) => write!(f, ">= gamma_{k}"),
        }
    }
}

/// A family of tables `A_0, A_1, ..` built on demand and shared.
pub struct TableSet {
    cfg: TableConfig,
    tables: Vec<OnceLock<Arc<LaverTable>>>,
}

impl fmt::Debug for TableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TableSet").field("cfg", &self.cfg).finish()
    }
}

impl Default for TableSet {
    fn default() -> Self {
        Self::new(TableConfig::default())
    }
}

impl TableSet {
    pub fn new(cfg: TableConfig) -> Self {
        TableSet {
            cfg,
            tables: (0..=HARD_CAP).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn config(&self) -> &TableConfig {
        &self.cfg
    }

    pub fn table(&self, n: u32) -> Result<Arc<LaverTable>, LaverError> {
        let cap = self.cfg.max_n.min(HARD_CAP);
        if n > cap {
            return Err(LaverError::CapExceeded { n, cap });
        }
        if let Some(t) = self.tables[n as usize].get() {
            return Ok(t.clone());
        }
        let t = Arc::new(build_table(n, &self.cfg)?);
        Ok(self.tables[n as usize].get_or_init(|| t).clone())
    }

    pub fn eval(&self, t: &Term, n: u32) -> Result<u32, LaverError> {
        self.table(n)?.eval(t)
    }

    /// `Exactly(k)` with `k ≤ max_n` when the image of `term` is the top
    /// element of `A_0..A_k` but not of `A_{k+1}`; otherwise
    /// `AtLeast(max_n + 1)`. Consults `A_0..A_{max_n+1}`.
    pub fn crit_index(&self, term: &Term, max_n: u32) -> Result<CritIndex, LaverError> {
        let mut first_moved = None;
        for n in 0..=max_n + 1 {
            let top = self.eval(term, n)? == 1u32 << n;
            match (top, first_moved) {
                (false, None) => first_moved = Some(n),
                (true, Some(lower)) => {
                    return Err(LaverError::MonotonicityViolation {
                        term: crate::term::render_compact(term),
                        lower,
                        top: n,
                    })
                }
                _ => {}
            }
        }
        Ok(match first_moved {
            Some(n) => CritIndex::Exactly(n - 1),
            None => CritIndex::AtLeast(max_n + 1),
        })
    }

    /// Least `n ≤ max_n` where the images differ, as `Exactly(n)`; otherwise
    /// `AtLeast(max_n + 1)`. Terms are `≡_{γ_m}`-equivalent for every `m`
    /// below the result.
    pub fn equiv_index(&self, t1: &Term, t2: &Term, max_n: u32) -> Result<CritIndex, LaverError> {
        for n in 0..=max_n {
            if self.eval(t1, n)? != self.eval(t2, n)? {
                return Ok(CritIndex::Exactly(n));
            }
        }
        Ok(CritIndex::AtLeast(max_n + 1))
    }
}
