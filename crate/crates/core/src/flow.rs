//! Lattice points of network flow polytopes and the contingency-table
//! counter built on them.
//!
//! A flow assigns a non-negative integer to every arrow so that at each
//! vertex `out − in = σ_x`. The search walks the arrows in quiver order and
//! prunes with per-vertex residuals: once a vertex has no unassigned
//! incoming (or outgoing) arrows left, its residual caps (or forces) the
//! value of the next incident arrow.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::{IntVector, Quiver};

pub const DEFAULT_SEARCH_BUDGET: u64 = 50_000_000;

/// One lattice point: a value per arrow in arrow order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FlowPoint(pub Vec<u64>);

impl FlowPoint {
    /// `out − in` at every vertex.
    pub fn balance(&self, q: &Quiver) -> IntVector {
        let mut bal = q.zeros().0;
        for (&(t, h), &v) in q.arrows().iter().zip(&self.0) {
            bal[t] += v as i64;
            bal[h] -= v as i64;
        }
        IntVector(bal)
    }
}

struct Search<'a> {
    arrows: &'a [(usize, usize)],
    residual: Vec<i64>,
    open_out: Vec<usize>,
    open_in: Vec<usize>,
    values: Vec<u64>,
    cap: i64,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn run(&mut self, k: usize, leaf: &mut dyn FnMut(&[u64])) -> Result<()> {
        if k == self.arrows.len() {
            if self.residual.iter().all(|&r| r == 0) {
                leaf(&self.values);
            }
            return Ok(());
        }
        let (t, h) = self.arrows[k];
        self.open_out[t] -= 1;
        self.open_in[h] -= 1;

        let (mut lo, mut hi) = (0i64, self.cap);
        let (rt, rh) = (self.residual[t], self.residual[h]);
        if self.open_in[t] == 0 {
            hi = hi.min(rt);
        }
        if self.open_out[t] == 0 {
            lo = lo.max(rt);
        }
        if self.open_out[h] == 0 {
            hi = hi.min(-rh);
        }
        if self.open_in[h] == 0 {
            lo = lo.max(-rh);
        }

        let mut outcome = Ok(());
        for v in lo..=hi {
            self.nodes += 1;
            if self.nodes > self.budget {
                outcome = Err(Error::BudgetExceeded {
                    what: "search node",
                    limit: self.budget,
                });
                break;
            }
            self.residual[t] -= v;
            self.residual[h] += v;
            self.values[k] = v as u64;
            outcome = self.run(k + 1, leaf);
            self.residual[t] += v;
            self.residual[h] -= v;
            if outcome.is_err() {
                break;
            }
        }
        self.values[k] = 0;
        self.open_out[t] += 1;
        self.open_in[h] += 1;
        outcome
    }
}

fn search(q: &Quiver, sigma: &IntVector, budget: u64, leaf: &mut dyn FnMut(&[u64])) -> Result<()> {
    if sigma.len() != q.vertex_count() {
        return Err(Error::InvalidVector(
            "weight does not match the quiver".into(),
        ));
    }
    if sigma.sum() != 0 {
        return Ok(());
    }
    let n = q.vertex_count();
    let mut open_out = vec![0; n];
    let mut open_in = vec![0; n];
    for &(t, h) in q.arrows() {
        open_out[t] += 1;
        open_in[h] += 1;
    }
    // no arrow of an acyclic network carries more than the total supply
    let cap = sigma.values().iter().filter(|&&s| s > 0).sum();
    let mut s = Search {
        arrows: q.arrows(),
        residual: sigma.values().to_vec(),
        open_out,
        open_in,
        values: vec![0; q.arrows().len()],
        cap,
        nodes: 0,
        budget,
    };
    s.run(0, leaf)
}

/// `|𝒫_σ ∩ ℤ^{Q_1}|`.
pub fn count_integer_flows(q: &Quiver, sigma: &IntVector, budget: u64) -> Result<BigUint> {
    let mut count = 0u64;
    search(q, sigma, budget, &mut |_| count += 1)?;
    Ok(BigUint::from(count))
}

/// Every lattice point of `𝒫_σ`, lexicographic in arrow order.
pub fn enumerate_integer_flows(
    q: &Quiver,
    sigma: &IntVector,
    budget: u64,
) -> Result<Vec<FlowPoint>> {
    let mut out = Vec::new();
    search(q, sigma, budget, &mut |v| out.push(FlowPoint(v.to_vec())))?;
    Ok(out)
}

/// Margins `(m, n, p, a, b)` of a 3-way table with `Σa = Σb = N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TableInstance {
    m: usize,
    n: usize,
    p: usize,
    a: Vec<u64>,
    b: Vec<u64>,
}

impl TableInstance {
    pub fn new(m: usize, n: usize, p: usize, a: Vec<u64>, b: Vec<u64>) -> Result<Self> {
        if m == 0 || n == 0 || p == 0 {
            return Err(Error::InvalidInstance("m, n and p must be positive".into()));
        }
        if a.len() != m {
            return Err(Error::InvalidInstance(format!(
                "a has {} entries, m = {m}",
                a.len()
            )));
        }
        if b.len() != n {
            return Err(Error::InvalidInstance(format!(
                "b has {} entries, n = {n}",
                b.len()
            )));
        }
        let (sa, sb): (u64, u64) = (a.iter().sum(), b.iter().sum());
        if sa != sb {
            return Err(Error::InvalidInstance(format!(
                "margin sums differ: sum(a) = {sa}, sum(b) = {sb}"
            )));
        }
        Ok(TableInstance { m, n, p, a, b })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn b(&self) -> &[u64] {
        &self.b
    }

    /// `N = Σ a_i = Σ b_j`.
    pub fn total(&self) -> u64 {
        self.a.iter().sum()
    }
}

/// `Q^p_{m,n}`: sources `x1..xm`, sinks `y1..yn`, `p` parallel arrows per
/// pair. Arrow `(i, j, k)` sits at index `(i·n + j)·p + k`.
pub fn bipartite_quiver(m: usize, n: usize, p: usize) -> Quiver {
    assert!(m >= 1 && n >= 1 && p >= 1, "m, n, p must be positive");
    let vertices: Vec<String> = (1..=m)
        .map(|i| format!("x{i}"))
        .chain((1..=n).map(|j| format!("y{j}")))
        .collect();
    let arrows = (0..m)
        .flat_map(|i| (0..n).flat_map(move |j| std::iter::repeat_n((i, m + j), p)))
        .collect();
    Quiver::from_indices(vertices, arrows).expect("bipartite quiver is valid")
}

/// `θ_{a,b}`: `a_i` at `x_i`, `−b_j` at `y_j`.
pub fn theta(inst: &TableInstance) -> IntVector {
    IntVector(
        inst.a
            .iter()
            .map(|&v| v as i64)
            .chain(inst.b.iter().map(|&v| -(v as i64)))
            .collect(),
    )
}

/// Number of `m × n × p` non-negative integer tables with the plane sums
/// `a` (fixed `i`) and `b` (fixed `j`). Entry `x_{ijk}` is the flow on the
/// `k`-th arrow `x_i → y_j`.
pub fn count_tables(inst: &TableInstance, budget: u64) -> Result<BigUint> {
    let q = bipartite_quiver(inst.m, inst.n, inst.p);
    count_integer_flows(&q, &theta(inst), budget)
}
