//! Seeded property checks shared by the acceptance runner and the property
//! suite. Each returns the number of cases examined or the first failure.

use std::collections::BTreeSet;

use qct_core::flow::{count_integer_flows, enumerate_integer_flows};
use qct_core::lr::{kostka_number, lr_coefficient};
use qct_core::partition::partitions_of;
use qct_core::pipeline::sweep_instances;
use qct_core::quiver::{dimvector_of_weight, euler_form, reflect, weight_of, IntVector, Quiver};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{brute_flows, random_balanced_weight, random_quiver, random_vector};

pub type Check = Result<usize, String>;

pub const SEED: u64 = 0x51c0_7ab1e5;

pub fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ salt)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `c^λ_{μν} = c^λ_{νμ}` for every `λ` of size at most `max_size`.
pub fn lr_symmetry(max_size: usize) -> Check {
    let mut cases = 0;
    for size in 0..=max_size {
        for lambda in partitions_of(size) {
            for k in 0..=size {
                let mus: Vec<_> = partitions_of(k)
                    .into_iter()
                    .filter(|mu| lambda.contains(mu))
                    .collect();
                let nus = partitions_of(size - k);
                for mu in &mus {
                    for nu in &nus {
                        let left = lr_coefficient(&lambda, mu, nu);
                        let right = lr_coefficient(&lambda, nu, mu);
                        ensure(left == right, || {
                            format!("c[{lambda}; {mu}, {nu}] = {left} but swapped gives {right}")
                        })?;
                        cases += 1;
                    }
                }
            }
        }
    }
    Ok(cases)
}

/// `K_{λμ} > 0` exactly when `λ ⊵ μ`, for partitions of size at most
/// `max_size`.
pub fn kostka_dominance(max_size: usize) -> Check {
    let mut cases = 0;
    for size in 0..=max_size {
        let parts = partitions_of(size);
        for lambda in &parts {
            for mu in &parts {
                let positive = kostka_number(lambda, mu.parts()) > 0u32.into();
                ensure(positive == lambda.dominates(mu), || {
                    format!(
                        "K[{lambda}; {mu}] positive = {positive}, dominance = {}",
                        lambda.dominates(mu)
                    )
                })?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

/// `s_x α` by the dimension-vector formula.
fn reflect_dim(q: &Quiver, alpha: &IntVector, x: &str) -> IntVector {
    reflect(q, alpha, &q.zeros(), x)
        .expect("x is a source or sink")
        .1
}

fn sources_and_sinks(q: &Quiver) -> Vec<usize> {
    (0..q.vertex_count())
        .filter(|&i| q.is_source(i) || q.is_sink(i))
        .collect()
}

/// Reflecting twice at a source or sink is the identity, and `s_x`
/// preserves the Euler form.
pub fn reflection_laws(quivers: usize) -> Check {
    let mut rng = rng(1);
    let mut cases = 0;
    for _ in 0..quivers {
        let q = random_quiver(&mut rng, 6, 8);
        let n = q.vertex_count();
        let beta = random_vector(&mut rng, n, -4, 6);
        let sigma = random_vector(&mut rng, n, -6, 6);
        let alpha = random_vector(&mut rng, n, -4, 6);
        for x in sources_and_sinks(&q) {
            let label = q.label(x);
            let (rq, rb, rs) = reflect(&q, &beta, &sigma, label).map_err(|e| e.to_string())?;
            let (qq, bb, ss) = reflect(&rq, &rb, &rs, label).map_err(|e| e.to_string())?;
            ensure(qq == q && bb == beta && ss == sigma, || {
                format!("double reflection at {label} changed {}", q.to_json())
            })?;
            let before = euler_form(&q, &alpha, &beta);
            let after = euler_form(
                &rq,
                &reflect_dim(&q, &alpha, label),
                &reflect_dim(&q, &beta, label),
            );
            ensure(before == after, || {
                format!(
                    "Euler form {before} became {after} after reflecting {} at {label}",
                    q.to_json()
                )
            })?;
            cases += 1;
        }
    }
    Ok(cases)
}

/// `s_x σ = weight_of(s_x Q, s_x α)` whenever `σ = weight_of(Q, α)`.
pub fn weight_compatibility(quivers: usize) -> Check {
    let mut rng = rng(2);
    let mut cases = 0;
    for _ in 0..quivers {
        let q = random_quiver(&mut rng, 6, 8);
        let alpha = random_vector(&mut rng, q.vertex_count(), -4, 6);
        let sigma = weight_of(&q, &alpha);
        for x in sources_and_sinks(&q) {
            let label = q.label(x);
            let (rq, ra, rs) = reflect(&q, &alpha, &sigma, label).map_err(|e| e.to_string())?;
            let expected = weight_of(&rq, &ra);
            ensure(rs == expected, || {
                format!(
                    "reflecting {} at {label}: s_x sigma = {:?}, weight of s_x alpha = {:?}",
                    q.to_json(),
                    rs.values(),
                    expected.values()
                )
            })?;
            cases += 1;
        }
    }
    Ok(cases)
}

/// `dimvector_of_weight ∘ weight_of = id` and the reverse composite.
pub fn weight_round_trip(cases: usize) -> Check {
    let mut rng = rng(3);
    for _ in 0..cases {
        let q = random_quiver(&mut rng, 6, 9);
        let alpha = random_vector(&mut rng, q.vertex_count(), -5, 8);
        let sigma = weight_of(&q, &alpha);
        let back = dimvector_of_weight(&q, &sigma);
        ensure(back == alpha, || {
            format!(
                "{}: {:?} -> {:?} -> {:?}",
                q.to_json(),
                alpha.values(),
                sigma.values(),
                back.values()
            )
        })?;
        ensure(weight_of(&q, &back) == sigma, || {
            format!("{}: weight not reproduced", q.to_json())
        })?;
    }
    Ok(cases)
}

fn positive_supply(sigma: &IntVector) -> i64 {
    sigma.values().iter().filter(|&&v| v > 0).sum()
}

/// Checks one flow instance: count equals the enumeration length, every
/// point balances, points are distinct and strictly lexicographic, and for
/// small instances the list equals the brute-force list.
pub fn flow_instance(q: &Quiver, sigma: &IntVector) -> Result<(), String> {
    let budget = 50_000_000;
    let count = count_integer_flows(q, sigma, budget).map_err(|e| e.to_string())?;
    let points = enumerate_integer_flows(q, sigma, budget).map_err(|e| e.to_string())?;
    let context = || format!("{} with sigma {:?}", q.to_json(), sigma.values());
    ensure(count == points.len().into(), || {
        format!("{}: count {count} but {} points", context(), points.len())
    })?;
    for pt in &points {
        ensure(pt.0.len() == q.arrows().len(), || {
            format!("{}: wrong point length", context())
        })?;
        ensure(pt.balance(q) == *sigma, || {
            format!("{}: {:?} does not balance", context(), pt.0)
        })?;
    }
    ensure(points.windows(2).all(|w| w[0].0 < w[1].0), || {
        format!("{}: points not strictly increasing", context())
    })?;
    let supply = positive_supply(sigma) as u64;
    let brute_cost = (supply + 1).checked_pow(q.arrows().len() as u32);
    if brute_cost.is_some_and(|c| c <= 200_000) {
        let brute = brute_flows(q, sigma, supply);
        let got: Vec<Vec<u64>> = points.iter().map(|p| p.0.clone()).collect();
        ensure(got == brute, || {
            format!("{}: differs from brute force", context())
        })?;
    }
    Ok(())
}

/// Count/enumerate agreement on random quivers with at most 12 arrows and
/// on every thin bipartite instance with at most 12 arrows, all with
/// `S⁺ ≤ 6`.
pub fn flow_agreement(random_cases: usize) -> Check {
    let mut rng = rng(4);
    let mut cases = 0;
    for _ in 0..random_cases {
        let q = random_quiver(&mut rng, 6, 12);
        let sigma = random_balanced_weight(&mut rng, q.vertex_count(), 6);
        if positive_supply(&sigma) > 6 {
            continue;
        }
        flow_instance(&q, &sigma)?;
        cases += 1;
    }
    let mut seen = BTreeSet::new();
    for inst in sweep_instances(3, 3, 2, 3, 6) {
        if inst.m() * inst.n() * inst.p() > 12 {
            continue;
        }
        let (q, theta) = qct_core::pipeline::build_bipartite(&inst);
        if seen.insert((inst.m(), inst.n(), inst.p(), theta.values().to_vec())) {
            flow_instance(&q, &theta)?;
            cases += 1;
        }
    }
    Ok(cases)
}
