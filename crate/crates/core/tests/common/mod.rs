//! Brute-force oracles and random generators shared by the integration
//! suites. The oracles never call the DP or the flow search.

#![allow(dead_code)]

pub mod checks;

use qct_core::quiver::{IntVector, Quiver};
use qct_core::{Partition, TableInstance};
use rand::seq::SliceRandom;
use rand::Rng;

/// Semistandard fillings of `outer/inner` with letters `1..=letters`,
/// visited cell by cell in row-major order.
fn for_each_ssyt(
    outer: &Partition,
    inner: &Partition,
    letters: usize,
    content_cap: Option<&[usize]>,
    visit: &mut dyn FnMut(&Vec<Vec<usize>>),
) {
    let rows = outer.length();
    let cells: Vec<(usize, usize)> = (0..rows)
        .flat_map(|r| (inner.part(r)..outer.part(r)).map(move |c| (r, c)))
        .collect();
    // 0 marks inner cells
    let mut grid: Vec<Vec<usize>> = (0..rows).map(|r| vec![0; outer.part(r)]).collect();
    let mut used = vec![0usize; letters + 1];

    #[allow(clippy::too_many_arguments)]
    fn go(
        k: usize,
        cells: &[(usize, usize)],
        grid: &mut Vec<Vec<usize>>,
        used: &mut Vec<usize>,
        letters: usize,
        cap: Option<&[usize]>,
        visit: &mut dyn FnMut(&Vec<Vec<usize>>),
    ) {
        if k == cells.len() {
            visit(grid);
            return;
        }
        let (r, c) = cells[k];
        let left = if c > 0 { grid[r][c - 1] } else { 0 };
        let above = if r > 0 { grid[r - 1][c] } else { 0 };
        let lo = left.max(above + 1).max(1);
        for v in lo..=letters {
            if let Some(cap) = cap {
                if used[v] >= cap.get(v - 1).copied().unwrap_or(0) {
                    continue;
                }
            }
            grid[r][c] = v;
            used[v] += 1;
            go(k + 1, cells, grid, used, letters, cap, visit);
            used[v] -= 1;
        }
        grid[r][c] = 0;
    }
    go(0, &cells, &mut grid, &mut used, letters, content_cap, visit);
}

/// `c^λ_{μν}` by listing every semistandard filling of `λ/μ` with content
/// `ν` and testing the reverse reading word for the lattice property.
pub fn brute_lr(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    if !lambda.contains(mu) || lambda.size() != mu.size() + nu.size() {
        return 0;
    }
    let letters = nu.length();
    let mut count = 0;
    for_each_ssyt(lambda, mu, letters, Some(nu.parts()), &mut |grid| {
        let mut seen = vec![0usize; letters + 2];
        let mut lattice = true;
        'rows: for (r, row) in grid.iter().enumerate() {
            for c in (mu.part(r)..row.len()).rev() {
                let v = row[c];
                seen[v] += 1;
                if v > 1 && seen[v] > seen[v - 1] {
                    lattice = false;
                    break 'rows;
                }
            }
        }
        let content_ok = (1..=letters).all(|v| seen[v] == nu.part(v - 1));
        if lattice && content_ok {
            count += 1;
        }
    });
    count
}

/// `K_{λ,content}` by listing semistandard tableaux.
pub fn brute_kostka(lambda: &Partition, content: &[usize]) -> u64 {
    if content.iter().sum::<usize>() != lambda.size() {
        return 0;
    }
    let mut count = 0;
    for_each_ssyt(
        lambda,
        &Partition::empty(),
        content.len(),
        Some(content),
        &mut |_| count += 1,
    );
    count
}

/// Standard Young tableaux of shape `λ` (hook-free count by filling).
pub fn brute_standard(lambda: &Partition) -> u64 {
    brute_kostka(lambda, &vec![1; lambda.size()])
}

/// Number of tables by an odometer over every entry in `0..=N`.
pub fn brute_tables(inst: &TableInstance) -> u64 {
    let (m, n, p) = (inst.m(), inst.n(), inst.p());
    let cells = m * n * p;
    let top = inst.total();
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * p + k;
    let mut x = vec![0u64; cells];
    let mut count = 0;
    loop {
        let rows_ok = (0..m).all(|i| {
            (0..n)
                .flat_map(|j| (0..p).map(move |k| (j, k)))
                .map(|(j, k)| x[idx(i, j, k)])
                .sum::<u64>()
                == inst.a()[i]
        });
        let cols_ok = rows_ok
            && (0..n).all(|j| {
                (0..m)
                    .flat_map(|i| (0..p).map(move |k| (i, k)))
                    .map(|(i, k)| x[idx(i, j, k)])
                    .sum::<u64>()
                    == inst.b()[j]
            });
        count += cols_ok as u64;
        let mut pos = 0;
        loop {
            if pos == cells {
                return count;
            }
            if x[pos] < top {
                x[pos] += 1;
                break;
            }
            x[pos] = 0;
            pos += 1;
        }
    }
}

/// Lattice points of `𝒫_σ` by trying every assignment in `0..=cap`.
pub fn brute_flows(q: &Quiver, sigma: &IntVector, cap: u64) -> Vec<Vec<u64>> {
    let k = q.arrows().len();
    let mut x = vec![0u64; k];
    let mut out = Vec::new();
    loop {
        let mut bal = vec![0i64; q.vertex_count()];
        for (&(t, h), &v) in q.arrows().iter().zip(&x) {
            bal[t] += v as i64;
            bal[h] -= v as i64;
        }
        if bal == sigma.values() {
            out.push(x.clone());
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                out.sort();
                return out;
            }
            pos -= 1;
            if x[pos] < cap {
                x[pos] += 1;
                break;
            }
            x[pos] = 0;
        }
    }
}

/// A random connected acyclic quiver on `2..=max_vertices` vertices with at
/// most `max_arrows` arrows.
pub fn random_quiver(rng: &mut impl Rng, max_vertices: usize, max_arrows: usize) -> Quiver {
    let n = rng.gen_range(2..=max_vertices);
    // arrows point from lower to higher rank
    let mut rank: Vec<usize> = (0..n).collect();
    rank.shuffle(rng);
    let orient = |a: usize, b: usize| if rank[a] < rank[b] { (a, b) } else { (b, a) };
    let mut arrows = Vec::new();
    for k in 1..n {
        let j = rng.gen_range(0..k);
        arrows.push(orient(j, k));
    }
    let extra = rng.gen_range(0..=max_arrows.saturating_sub(n - 1));
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            arrows.push(orient(a, b));
        }
    }
    arrows.shuffle(rng);
    let labels = (0..n).map(|i| format!("v{i}")).collect();
    Quiver::from_indices(labels, arrows).expect("rank-ordered arrows form a connected DAG")
}

pub fn random_vector(rng: &mut impl Rng, len: usize, lo: i64, hi: i64) -> IntVector {
    IntVector((0..len).map(|_| rng.gen_range(lo..=hi)).collect())
}

/// A weight with `Σσ = 0` and total supply at most `max_supply`.
pub fn random_balanced_weight(rng: &mut impl Rng, len: usize, max_supply: i64) -> IntVector {
    let supply = rng.gen_range(0..=max_supply);
    let mut v = vec![0i64; len];
    for _ in 0..supply {
        let a = rng.gen_range(0..len);
        let b = rng.gen_range(0..len);
        v[a] += 1;
        v[b] -= 1;
    }
    IntVector(v)
}

pub fn part(p: &[usize]) -> Partition {
    Partition::new(p.to_vec()).unwrap()
}

pub fn inst(m: usize, n: usize, p: usize, a: &[u64], b: &[u64]) -> TableInstance {
    TableInstance::new(m, n, p, a.to_vec(), b.to_vec()).unwrap()
}
