//! Littlewood–Richardson calculus in the Schur basis, truncated to `GL(r)`.
//!
//! The workhorse is a dynamic program that adds the letters of the content
//! one at a time as horizontal strips. For a filling read right-to-left,
//! top-to-bottom, the lattice condition is equivalent to requiring, for every
//! row `r` and letter `k > 0`,
//!
//! ```text
//! #k in rows 0..=r  <=  #(k-1) in rows 0..r
//! ```
//!
//! so a DP state only needs the current shape and the row distribution of
//! the previous letter.
//!
//! [`tensor_mult_oracle`] is an independent route: it multiplies explicit
//! Schur polynomials and extracts multiplicities through the Weyl
//! alternant. It shares no code with the DP.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

pub const DEFAULT_TERM_BUDGET: u64 = 5_000_000;

/// Caps the total number of intermediate terms (DP states, expansion
/// entries, monomials) one computation may create.
#[derive(Clone, Debug)]
pub struct TermBudget {
    limit: u64,
    used: u64,
}

impl TermBudget {
    pub fn new(limit: u64) -> Self {
        TermBudget { limit, used: 0 }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub(crate) fn charge(&mut self, n: usize) -> Result<()> {
        self.used = self.used.saturating_add(n as u64);
        if self.used > self.limit {
            Err(Error::BudgetExceeded {
                what: "expansion term",
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for TermBudget {
    fn default() -> Self {
        TermBudget::new(DEFAULT_TERM_BUDGET)
    }
}

/// A homogeneous, non-negative combination of Schur functions in at most
/// `row_bound` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchurExpansion {
    terms: BTreeMap<Partition, BigUint>,
    row_bound: usize,
}

impl SchurExpansion {
    /// The unit `s_()`.
    pub fn one(row_bound: usize) -> Self {
        assert!(row_bound >= 1, "row bound must be positive");
        let mut terms = BTreeMap::new();
        terms.insert(Partition::empty(), BigUint::one());
        SchurExpansion { terms, row_bound }
    }

    /// Builds an expansion, dropping zero multiplicities and checking the
    /// row bound and homogeneity.
    pub fn from_terms(
        row_bound: usize,
        terms: impl IntoIterator<Item = (Partition, BigUint)>,
    ) -> Result<Self> {
        if row_bound == 0 {
            return Err(Error::InvalidKostkaInstance(
                "row bound must be positive".into(),
            ));
        }
        let mut map: BTreeMap<Partition, BigUint> = BTreeMap::new();
        for (p, c) in terms {
            if p.length() > row_bound {
                return Err(Error::InvalidKostkaInstance(format!(
                    "({p}) has more than {row_bound} rows"
                )));
            }
            *map.entry(p).or_default() += c;
        }
        map.retain(|_, c| !c.is_zero());
        let mut sizes = map.keys().map(Partition::size);
        if let Some(first) = sizes.next() {
            if sizes.any(|s| s != first) {
                return Err(Error::InvalidKostkaInstance(
                    "expansion is not homogeneous".into(),
                ));
            }
        }
        Ok(SchurExpansion {
            terms: map,
            row_bound,
        })
    }

    pub fn terms(&self) -> &BTreeMap<Partition, BigUint> {
        &self.terms
    }

    pub fn row_bound(&self) -> usize {
        self.row_bound
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, lambda: &Partition) -> BigUint {
        self.terms.get(lambda).cloned().unwrap_or_default()
    }

    /// Common size of the keys, `None` for the zero expansion.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next().map(Partition::size)
    }
}

/// DP over horizontal strips. Returns every `ν ⊇ μ` with at most `rows`
/// rows (and inside `bound`, if given) together with the number of LR
/// tableaux of shape `ν/μ` and the given content.
fn lr_expand(
    mu: &Partition,
    content: &[usize],
    rows: usize,
    bound: Option<&Partition>,
    budget: &mut TermBudget,
) -> Result<Vec<(Partition, BigUint)>> {
    if mu.length() > rows || bound.is_some_and(|b| !b.contains(mu)) {
        return Ok(Vec::new());
    }
    let rows = rows.min(mu.length() + content.len());
    let cap: Vec<usize> = (0..rows)
        .map(|r| bound.map_or(usize::MAX, |b| b.part(r)))
        .collect();
    let mut start = mu.parts().to_vec();
    start.resize(rows, 0);

    type State = (Vec<usize>, Vec<usize>);
    let mut states: HashMap<State, BigUint> = HashMap::new();
    states.insert((start, vec![0; rows]), BigUint::one());

    for (letter, &count) in content.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let mut next: HashMap<State, BigUint> = HashMap::new();
        for ((shape, prev), mult) in &states {
            let mut strip = vec![0usize; rows];
            place_strip(
                &StripCtx {
                    shape,
                    prev,
                    cap: &cap,
                    lattice: letter > 0,
                },
                0,
                count,
                0,
                0,
                &mut strip,
                &mut |strip| {
                    let new_shape: Vec<usize> =
                        shape.iter().zip(strip).map(|(s, c)| s + c).collect();
                    *next.entry((new_shape, strip.to_vec())).or_default() += mult;
                },
            );
        }
        budget.charge(next.len())?;
        states = next;
        if states.is_empty() {
            break;
        }
    }

    let mut out: BTreeMap<Partition, BigUint> = BTreeMap::new();
    for ((mut shape, _), mult) in states {
        while shape.last() == Some(&0) {
            shape.pop();
        }
        *out.entry(Partition::from_normalized(shape)).or_default() += mult;
    }
    Ok(out.into_iter().collect())
}

struct StripCtx<'a> {
    shape: &'a [usize],
    prev: &'a [usize],
    cap: &'a [usize],
    lattice: bool,
}

/// Distributes `remaining` cells over rows `row..`, as a horizontal strip
/// on `ctx.shape` obeying the lattice condition against `ctx.prev`.
fn place_strip(
    ctx: &StripCtx<'_>,
    row: usize,
    remaining: usize,
    placed_so_far: usize,
    prev_before: usize,
    strip: &mut [usize],
    emit: &mut dyn FnMut(&[usize]),
) {
    if remaining == 0 {
        emit(strip);
        return;
    }
    if row == ctx.shape.len() {
        return;
    }
    let here = ctx.shape[row];
    let mut max = if row == 0 {
        usize::MAX
    } else {
        ctx.shape[row - 1] - here
    };
    max = max.min(ctx.cap[row].saturating_sub(here)).min(remaining);
    if ctx.lattice {
        // letters in rows 0..=row may not outnumber previous-letter cells in rows 0..row
        max = max.min(prev_before.saturating_sub(placed_so_far));
        if placed_so_far > prev_before {
            return;
        }
    }
    for c in (0..=max).rev() {
        strip[row] = c;
        place_strip(
            ctx,
            row + 1,
            remaining - c,
            placed_so_far + c,
            prev_before + ctx.prev[row],
            strip,
            emit,
        );
    }
    strip[row] = 0;
}

/// `c^λ_{μν}`: the number of LR tableaux of shape `λ/μ` with content `ν`.
pub fn lr_coefficient(lambda: &Partition, mu: &Partition, nu: &Partition) -> BigUint {
    if lambda.size() != mu.size() + nu.size() || !lambda.contains(mu) {
        return BigUint::zero();
    }
    let mut budget = TermBudget::new(u64::MAX);
    lr_expand(mu, nu.parts(), lambda.length(), Some(lambda), &mut budget)
        .expect("unbounded budget")
        .into_iter()
        .find(|(p, _)| p == lambda)
        .map(|(_, c)| c)
        .unwrap_or_default()
}

/// `K_{λ,μ}`: semistandard tableaux of shape `λ` whose content is the
/// composition `content` (zeros allowed, any order).
pub fn kostka_number(lambda: &Partition, content: &[usize]) -> BigUint {
    if content.iter().sum::<usize>() != lambda.size() {
        return BigUint::zero();
    }
    let rows = lambda.length();
    let mut states: HashMap<Vec<usize>, BigUint> = HashMap::new();
    states.insert(vec![0; rows], BigUint::one());
    for &count in content.iter().filter(|&&c| c > 0) {
        let mut next: HashMap<Vec<usize>, BigUint> = HashMap::new();
        for (shape, mult) in &states {
            horizontal_strips(shape, lambda.parts(), count, &mut |s| {
                *next.entry(s.to_vec()).or_default() += mult;
            });
        }
        states = next;
    }
    states.remove(lambda.parts()).unwrap_or_default()
}

/// Every way of adding a horizontal strip of `size` cells to `shape` while
/// staying inside `outer`.
fn horizontal_strips(
    shape: &[usize],
    outer: &[usize],
    size: usize,
    emit: &mut dyn FnMut(&[usize]),
) {
    fn go(
        shape: &[usize],
        outer: &[usize],
        row: usize,
        left: usize,
        cur: &mut Vec<usize>,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        if left == 0 {
            emit(cur);
            return;
        }
        if row == shape.len() {
            return;
        }
        let ceiling = if row == 0 {
            outer[0]
        } else {
            outer[row].min(shape[row - 1])
        };
        let room = ceiling - shape[row];
        for add in 0..=room.min(left) {
            cur[row] = shape[row] + add;
            go(shape, outer, row + 1, left - add, cur, emit);
        }
        cur[row] = shape[row];
    }
    let mut cur = shape.to_vec();
    go(shape, outer, 0, size, &mut cur, emit);
}

/// Multiplies by `s_factor`, optionally keeping only partitions inside
/// `bound`. Every intermediate partition of a product landing on `λ` is
/// contained in `λ`, so bounding by the target never changes its
/// coefficient.
pub fn schur_multiply_within(
    current: &SchurExpansion,
    factor: &Partition,
    bound: Option<&Partition>,
    budget: &mut TermBudget,
) -> Result<SchurExpansion> {
    let row_bound = current.row_bound;
    if factor.is_empty() {
        return Ok(current.clone());
    }
    if factor.length() > row_bound {
        // s_factor vanishes in row_bound variables
        return Ok(SchurExpansion {
            terms: BTreeMap::new(),
            row_bound,
        });
    }
    let mut terms: BTreeMap<Partition, BigUint> = BTreeMap::new();
    for (mu, mult) in &current.terms {
        for (nu, c) in lr_expand(mu, factor.parts(), row_bound, bound, budget)? {
            *terms.entry(nu).or_default() += mult * c;
        }
        budget.charge(0)?;
    }
    budget.charge(terms.len())?;
    Ok(SchurExpansion { terms, row_bound })
}

/// `current · s_factor`, truncated to `current.row_bound()` rows.
pub fn schur_multiply(current: &SchurExpansion, factor: &Partition) -> SchurExpansion {
    let mut budget = TermBudget::new(u64::MAX);
    schur_multiply_within(current, factor, None, &mut budget).expect("unbounded budget")
}

/// Expands `s_{f_1} · s_{f_2} ⋯` in the given order.
pub fn expand_product(
    factors: &[Partition],
    row_bound: usize,
    bound: Option<&Partition>,
    budget: &mut TermBudget,
) -> Result<SchurExpansion> {
    let mut acc = SchurExpansion::one(row_bound);
    for f in factors {
        acc = schur_multiply_within(&acc, f, bound, budget)?;
        if acc.is_empty() {
            break;
        }
    }
    Ok(acc)
}

/// `K_{λ,ℛ}` in `GL(rank)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KostkaInstance {
    lambda: Partition,
    rectangles: Vec<Partition>,
    rank: usize,
}

impl KostkaInstance {
    pub fn new(lambda: Partition, rectangles: Vec<Partition>, rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidKostkaInstance("rank must be positive".into()));
        }
        if lambda.length() > rank {
            return Err(Error::InvalidKostkaInstance(format!(
                "lambda ({lambda}) has more than {rank} rows"
            )));
        }
        for (i, r) in rectangles.iter().enumerate() {
            if !r.is_rectangular() {
                return Err(Error::InvalidKostkaInstance(format!(
                    "factor {i} ({r}) is not rectangular"
                )));
            }
            if r.length() > rank {
                return Err(Error::InvalidKostkaInstance(format!(
                    "factor {i} ({r}) has more than {rank} rows"
                )));
            }
        }
        Ok(KostkaInstance {
            lambda,
            rectangles,
            rank,
        })
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn rectangles(&self) -> &[Partition] {
        &self.rectangles
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Necessary condition for a non-zero value.
    pub fn sizes_match(&self) -> bool {
        self.lambda.size() == self.rectangles.iter().map(Partition::size).sum::<usize>()
    }
}

/// Multiplicity of `V_λ` in `V_{R_1} ⊗ ⋯ ⊗ V_{R_s}` for `GL(rank)`.
pub fn parabolic_kostka(inst: &KostkaInstance, budget: &mut TermBudget) -> Result<BigUint> {
    if !inst.sizes_match() {
        return Ok(BigUint::zero());
    }
    let exp = expand_product(&inst.rectangles, inst.rank, Some(&inst.lambda), budget)?;
    Ok(exp.coefficient(&inst.lambda))
}

type Monomials = HashMap<Vec<usize>, BigUint>;

/// `s_shape(x_1..x_vars)` as explicit monomials, dropping any monomial with
/// an exponent above `max_exp`.
fn schur_polynomial(
    shape: &Partition,
    vars: usize,
    max_exp: usize,
    budget: &mut TermBudget,
) -> Result<Monomials> {
    let cells: Vec<(usize, usize)> = (0..shape.length())
        .flat_map(|r| (0..shape.part(r)).map(move |c| (r, c)))
        .collect();
    let width = shape.part(0);
    let mut grid = vec![vec![0usize; width]; shape.length()];
    let mut exps = vec![0usize; vars];
    let mut out = Monomials::new();
    let mut visited = 0usize;

    #[allow(clippy::too_many_arguments)]
    fn fill(
        k: usize,
        cells: &[(usize, usize)],
        grid: &mut Vec<Vec<usize>>,
        exps: &mut Vec<usize>,
        vars: usize,
        max_exp: usize,
        out: &mut Monomials,
        visited: &mut usize,
    ) {
        if k == cells.len() {
            *out.entry(exps.clone()).or_default() += 1u32;
            return;
        }
        *visited += 1;
        let (r, c) = cells[k];
        let lo_row = if c > 0 { grid[r][c - 1] } else { 1 };
        let lo_col = if r > 0 { grid[r - 1][c] + 1 } else { 1 };
        for v in lo_row.max(lo_col)..=vars {
            if exps[v - 1] == max_exp {
                continue;
            }
            grid[r][c] = v;
            exps[v - 1] += 1;
            fill(k + 1, cells, grid, exps, vars, max_exp, out, visited);
            exps[v - 1] -= 1;
        }
    }

    fill(
        0,
        &cells,
        &mut grid,
        &mut exps,
        vars,
        max_exp,
        &mut out,
        &mut visited,
    );
    budget.charge(visited + out.len())?;
    Ok(out)
}

fn multiply_monomials(
    a: &Monomials,
    b: &Monomials,
    max_exp: usize,
    budget: &mut TermBudget,
) -> Result<Monomials> {
    let mut out = Monomials::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<usize> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if e.iter().any(|&x| x > max_exp) {
                continue;
            }
            *out.entry(e).or_default() += ca * cb;
        }
        budget.charge(0)?;
    }
    budget.charge(out.len())?;
    Ok(out)
}

/// Independent route to `K_{λ,ℛ}`: multiply the Schur polynomials of the
/// rectangles in `rank` variables as monomial sums, then read off
/// `Σ_{w∈S_r} sgn(w) · [x^{w(λ+ρ)−ρ}]` with `ρ = (r−1, …, 0)`.
pub fn tensor_mult_oracle(inst: &KostkaInstance, budget: &mut TermBudget) -> Result<BigUint> {
    if !inst.sizes_match() {
        return Ok(BigUint::zero());
    }
    let r = inst.rank;
    let shifted: Vec<usize> = (0..r).map(|i| inst.lambda.part(i) + (r - 1 - i)).collect();
    // no exponent of any w(λ+ρ)−ρ exceeds λ_1 + r − 1, and exponents only grow
    let max_exp = inst.lambda.part(0) + r - 1;

    let mut product = Monomials::new();
    product.insert(vec![0; r], BigUint::one());
    for rect in &inst.rectangles {
        let poly = schur_polynomial(rect, r, max_exp, budget)?;
        product = multiply_monomials(&product, &poly, max_exp, budget)?;
    }

    let mut total = BigInt::zero();
    for w in (0..r).permutations(r) {
        let inversions = (0..r)
            .tuple_combinations()
            .filter(|&(i, j)| w[i] > w[j])
            .count();
        let exponent: Option<Vec<usize>> = (0..r)
            .map(|i| shifted[w[i]].checked_sub(r - 1 - i))
            .collect();
        let Some(exponent) = exponent else { continue };
        if let Some(c) = product.get(&exponent) {
            let c = BigInt::from(c.clone());
            if inversions % 2 == 0 {
                total += c;
            } else {
                total -= c;
            }
        }
    }
    assert!(
        !total.is_negative(),
        "alternant extraction produced a negative multiplicity"
    );
    Ok(total.magnitude().clone())
}
