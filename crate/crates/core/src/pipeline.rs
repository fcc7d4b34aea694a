//! The chain of quivers linking 3-way tables to a parabolic Kostka
//! coefficient, rebuilt from first principles for each instance, and the
//! cross-check of every counting route.
//!
//! ```text
//! (Q^p_{m,n}, 1, θ_{a,b})
//!   --embedding-->   (𝒯, β̂ = I(1), σ̂ = ⟨I(α),·⟩)
//!   --drop x0-->     (𝒮, β, σ_{a,b})
//!   --reflect x_ℓ--> (𝒮̃, β̃, σ̃)
//!   --Cauchy-->      K_{λ,ℛ} in GL(pm)
//! ```
//!
//! Each stage is computed with the quiver machinery and then compared entry
//! by entry against its closed form; any difference is a
//! [`Error::StageMismatch`].

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::flow::{bipartite_quiver, count_tables, theta, TableInstance, DEFAULT_SEARCH_BUDGET};
use crate::lr::{
    expand_product, kostka_number, parabolic_kostka, tensor_mult_oracle, KostkaInstance,
    TermBudget, DEFAULT_TERM_BUDGET,
};
use crate::partition::{partitions_bounded, Partition};
use crate::quiver::{
    dimvector_of_weight, embed, quiver_of_sequence, reflect, remove_zero_weight_vertex, weight_of,
    ExceptionalSequenceData, IntVector, Quiver,
};

/// A quiver with a dimension vector and a weight on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stage {
    pub quiver: Quiver,
    pub beta: IntVector,
    pub sigma: IntVector,
}

/// `(Q^p_{m,n}, θ_{a,b})`.
pub fn build_bipartite(inst: &TableInstance) -> (Quiver, IntVector) {
    (bipartite_quiver(inst.m(), inst.n(), inst.p()), theta(inst))
}

fn x(i: usize) -> String {
    format!("x{i}")
}

fn y(j: usize) -> String {
    format!("y{j}")
}

/// `𝒯` (sources `x1..x_{m+p}` into `x0`, then `x0 → y0 → y_j`) and
/// `ℰ = (δ_1, …, δ_m, e_{y_1}, …, e_{y_n})`.
pub fn build_t_and_sequence(
    m: usize,
    n: usize,
    p: usize,
) -> Result<(Quiver, ExceptionalSequenceData)> {
    let vertices: Vec<String> = (1..=m + p)
        .map(x)
        .chain(["x0".to_string(), "y0".to_string()])
        .chain((1..=n).map(y))
        .collect();
    let arrows: Vec<(String, String)> = (1..=m + p)
        .map(|l| (x(l), "x0".to_string()))
        .chain([("x0".to_string(), "y0".to_string())])
        .chain((1..=n).map(|j| ("y0".to_string(), y(j))))
        .collect();
    let t = Quiver::new(vertices, arrows)?;

    let p_i = p as i64;
    let mut epsilons = Vec::with_capacity(m + n);
    for i in 1..=m {
        let xi = x(i);
        let extra: Vec<String> = (m + 1..=m + p).map(x).collect();
        let mut entries = vec![("x0", p_i + 1), ("y0", p_i), (xi.as_str(), 1)];
        entries.extend(extra.iter().map(|v| (v.as_str(), 1)));
        epsilons.push(t.vector(entries)?);
    }
    for j in 1..=n {
        epsilons.push(t.simple(&y(j))?);
    }
    let seq = ExceptionalSequenceData::new(t.clone(), epsilons)?;
    seq.check_euler_conditions()?;
    Ok((t, seq))
}

/// Compares `actual` against `(label, value)` pairs covering every vertex.
fn expect_values(
    stage: &'static str,
    q: &Quiver,
    actual: &IntVector,
    expected: &[(String, i64)],
) -> Result<()> {
    if expected.len() != q.vertex_count() {
        return Err(Error::StageMismatch {
            stage,
            entry: "vertex count".into(),
            expected: expected.len().to_string(),
            actual: q.vertex_count().to_string(),
        });
    }
    for (label, want) in expected {
        let got = q.value(actual, label)?;
        if got != *want {
            return Err(Error::StageMismatch {
                stage,
                entry: label.clone(),
                expected: want.to_string(),
                actual: got.to_string(),
            });
        }
    }
    Ok(())
}

/// Closed forms shared by several stages; everything is `i64`.
struct Closed {
    m: usize,
    n: usize,
    p: usize,
    a: Vec<i64>,
    b: Vec<i64>,
    total: i64,
    m_i: i64,
    p_i: i64,
}

impl Closed {
    fn new(inst: &TableInstance) -> Self {
        Closed {
            m: inst.m(),
            n: inst.n(),
            p: inst.p(),
            a: inst.a().iter().map(|&v| v as i64).collect(),
            b: inst.b().iter().map(|&v| v as i64).collect(),
            total: inst.total() as i64,
            m_i: inst.m() as i64,
            p_i: inst.p() as i64,
        }
    }

    /// Values for `x1..xm`, `x_{m+1}..x_{m+p}`, a middle block, `y1..yn`.
    fn list(
        &self,
        sources: impl Fn(usize) -> i64,
        extra: i64,
        middle: &[(&str, i64)],
        sinks: impl Fn(usize) -> i64,
    ) -> Vec<(String, i64)> {
        (1..=self.m)
            .map(|i| (x(i), sources(i - 1)))
            .chain((1..=self.p).map(|l| (x(self.m + l), extra)))
            .chain(middle.iter().map(|(k, v)| (k.to_string(), *v)))
            .chain((1..=self.n).map(|j| (y(j), sinks(j - 1))))
            .collect()
    }
}

/// Builds `(𝒯, β̂, σ̂)` from `ℰ` and checks it, together with `Q(ℰ)` and
/// the weight-realizing vector `α`.
fn build_t_stage(inst: &TableInstance, c: &Closed) -> Result<Stage> {
    let (bip, theta) = build_bipartite(inst);
    let alpha = dimvector_of_weight(&bip, &theta);
    let alpha_closed: Vec<(String, i64)> = (1..=c.m)
        .map(|i| (x(i), c.a[i - 1]))
        .chain((1..=c.n).map(|j| (y(j), c.p_i * c.total - c.b[j - 1])))
        .collect();
    expect_values("alpha", &bip, &alpha, &alpha_closed)?;
    if weight_of(&bip, &alpha) != theta {
        return Err(Error::StageMismatch {
            stage: "theta",
            entry: "weight_of(alpha)".into(),
            expected: format!("{:?}", theta.values()),
            actual: format!("{:?}", weight_of(&bip, &alpha).values()),
        });
    }

    let (t, seq) = build_t_and_sequence(c.m, c.n, c.p)?;
    let qe = quiver_of_sequence(&seq)?;
    if qe.arrow_matrix() != bip.arrow_matrix() {
        return Err(Error::StageMismatch {
            stage: "Q(E)",
            entry: "arrow matrix".into(),
            expected: format!("{:?}", bip.arrow_matrix()),
            actual: format!("{:?}", qe.arrow_matrix()),
        });
    }

    // Q(ℰ) and Q^p_{m,n} share the canonical vertex order.
    let beta_hat = embed(&seq, &bip.ones());
    let (m, p, total) = (c.m_i, c.p_i, c.total);
    expect_values(
        "beta_hat",
        &t,
        &beta_hat,
        &c.list(|_| 1, m, &[("x0", (p + 1) * m), ("y0", p * m)], |_| 1),
    )?;
    let i_alpha = embed(&seq, &alpha);
    expect_values(
        "I(alpha)",
        &t,
        &i_alpha,
        &c.list(
            |i| c.a[i],
            total,
            &[("x0", (p + 1) * total), ("y0", p * total)],
            |j| p * total - c.b[j],
        ),
    )?;
    let sigma_hat = weight_of(&t, &i_alpha);
    expect_values(
        "sigma_hat",
        &t,
        &sigma_hat,
        &c.list(|i| c.a[i], total, &[("x0", 0), ("y0", -total)], |j| -c.b[j]),
    )?;
    Ok(Stage {
        quiver: t,
        beta: beta_hat,
        sigma: sigma_hat,
    })
}

/// Removes `x0` from `𝒯` and renames `y0` to `z0`, giving `(𝒮, β, σ_{a,b})`.
pub fn reduce_to_star(inst: &TableInstance, t: &Stage) -> Result<Stage> {
    let (q, beta, sigma) = remove_zero_weight_vertex(&t.quiver, &t.beta, &t.sigma, "x0")?;
    let q = q.rename_vertex("y0", "z0")?;
    let c = Closed::new(inst);
    let (m, p, total) = (c.m_i, c.p_i, c.total);
    expect_values(
        "beta",
        &q,
        &beta,
        &c.list(|_| 1, m, &[("z0", m * p)], |_| 1),
    )?;
    expect_values(
        "sigma",
        &q,
        &sigma,
        &c.list(|i| c.a[i], total, &[("z0", -total)], |j| -c.b[j]),
    )?;
    Ok(Stage {
        quiver: q,
        beta,
        sigma,
    })
}

/// Reflects `𝒮` at `x1, …, x_{m+p}` in that order, giving `(𝒮̃, β̃, σ̃)`.
pub fn reflect_to_tilde(inst: &TableInstance, star: &Stage) -> Result<Stage> {
    reflect_in_order(inst, star, &(1..=inst.m() + inst.p()).collect::<Vec<_>>())
}

/// As [`reflect_to_tilde`] with an arbitrary order of the source vertices.
pub fn reflect_in_order(inst: &TableInstance, star: &Stage, order: &[usize]) -> Result<Stage> {
    let (mut q, mut beta, mut sigma) = (star.quiver.clone(), star.beta.clone(), star.sigma.clone());
    for &l in order {
        let label = x(l);
        let (rq, rb, rs) = reflect(&q, &beta, &sigma, &label)?;
        let value = rq.value(&rb, &label)?;
        if value < 0 {
            return Err(Error::ReflectionIllegal {
                vertex: label,
                value,
            });
        }
        (q, beta, sigma) = (rq, rb, rs);
    }
    let c = Closed::new(inst);
    let (m, p, total) = (c.m_i, c.p_i, c.total);
    expect_values(
        "beta_tilde",
        &q,
        &beta,
        &c.list(|_| p * m - 1, m * (p - 1), &[("z0", p * m)], |_| 1),
    )?;
    expect_values(
        "sigma_tilde",
        &q,
        &sigma,
        &c.list(|i| -c.a[i], -total, &[("z0", p * total)], |j| -c.b[j]),
    )?;
    let z0 = q.index_of("z0")?;
    if let Some(&(t, h)) = q.arrows().iter().find(|a| a.0 != z0) {
        return Err(Error::StageMismatch {
            stage: "S_tilde",
            entry: format!("arrow {} -> {}", q.label(t), q.label(h)),
            expected: "every arrow leaves z0".into(),
            actual: "arrow from another vertex".into(),
        });
    }
    Ok(Stage {
        quiver: q,
        beta,
        sigma,
    })
}

/// `λ = ((pN)^{pm})`, `ℛ = (N^{(p−1)m})^{×p}, (a_i^{pm−1}), (b_j)`, rank `pm`.
pub fn kostka_instance_of(inst: &TableInstance) -> KostkaInstance {
    let (m, p) = (inst.m(), inst.p());
    let total = inst.total() as usize;
    let lambda = Partition::rectangle(p * m, p * total);
    let rectangles: Vec<Partition> =
        std::iter::repeat_n(Partition::rectangle((p - 1) * m, total), p)
            .chain(
                inst.a()
                    .iter()
                    .map(|&a| Partition::rectangle(p * m - 1, a as usize)),
            )
            .chain(
                inst.b()
                    .iter()
                    .map(|&b| Partition::rectangle(1, b as usize)),
            )
            .collect();
    let k = KostkaInstance::new(lambda, rectangles, p * m).expect("rectangle heights fit pm");
    assert_eq!(
        k.lambda().size(),
        p * p * m * total,
        "size(lambda) must equal p^2 m N"
    );
    assert!(
        k.sizes_match(),
        "size(lambda) must equal the total rectangle size"
    );
    k
}

/// Reads `K_{λ,ℛ}` off `(𝒮̃, β̃, σ̃)`: every arrow `z0 → v` contributes the
/// rectangle `((−σ̃_v)^{β̃_v})` and `λ = (σ̃_{z0}^{β̃_{z0}})`.
fn kostka_instance_from_tilde(inst: &TableInstance, tilde: &Stage) -> Result<KostkaInstance> {
    let q = &tilde.quiver;
    let rect_at = |label: &str| -> Result<Partition> {
        let h = q.value(&tilde.beta, label)?;
        let w = -q.value(&tilde.sigma, label)?;
        Ok(Partition::rectangle(h.max(0) as usize, w.max(0) as usize))
    };
    let (m, n, p) = (inst.m(), inst.n(), inst.p());
    let mut rects = Vec::new();
    for l in m + 1..=m + p {
        rects.push(rect_at(&x(l))?);
    }
    for i in 1..=m {
        rects.push(rect_at(&x(i))?);
    }
    for j in 1..=n {
        rects.push(rect_at(&y(j))?);
    }
    let height = q.value(&tilde.beta, "z0")?;
    let width = q.value(&tilde.sigma, "z0")?;
    let lambda = Partition::rectangle(height as usize, width as usize);
    KostkaInstance::new(lambda, rects, height as usize)
}

/// Every intermediate object for one instance.
#[derive(Clone, Debug, Serialize)]
pub struct PipelineTrace {
    pub instance: TableInstance,
    pub bipartite: Stage,
    pub t: Stage,
    pub star: Stage,
    pub tilde: Stage,
    pub kostka: KostkaInstance,
}

/// Runs the whole reduction and checks every stage.
pub fn build_trace(inst: &TableInstance) -> Result<PipelineTrace> {
    let c = Closed::new(inst);
    let (bq, theta) = build_bipartite(inst);
    let bipartite = Stage {
        beta: bq.ones(),
        quiver: bq,
        sigma: theta,
    };
    let t = build_t_stage(inst, &c)?;
    let star = reduce_to_star(inst, &t)?;
    let tilde = reflect_to_tilde(inst, &star)?;
    let kostka = kostka_instance_of(inst);
    let derived = kostka_instance_from_tilde(inst, &tilde)?;
    if derived != kostka {
        return Err(Error::StageMismatch {
            stage: "kostka",
            entry: "instance read from S_tilde".into(),
            expected: format!("{kostka:?}"),
            actual: format!("{derived:?}"),
        });
    }
    // σ(β) = Σ_x σ_x β_x vanishes at every stage; Σ_x σ_x itself only
    // vanishes on the thin bipartite stage.
    for s in [&bipartite, &t, &star, &tilde] {
        let pairing = s.pairing();
        if pairing != 0 {
            return Err(Error::StageMismatch {
                stage: "balance",
                entry: "sigma(beta)".into(),
                expected: "0".into(),
                actual: pairing.to_string(),
            });
        }
    }
    Ok(PipelineTrace {
        instance: inst.clone(),
        bipartite,
        t,
        star,
        tilde,
        kostka,
    })
}

/// `Σ_μ K_{μ,{(a_1),…,(a_m),(N^m)^{×p}}} · K_{μ,{(b_1),…,(b_n),(N^{mp})}}`
/// in `GL(mp)`.
pub fn corollary_sum(inst: &TableInstance, budget: &mut TermBudget) -> Result<BigUint> {
    let (m, p) = (inst.m(), inst.p());
    let total = inst.total() as usize;
    let rank = m * p;
    let row = |v: &u64| Partition::rectangle(1, *v as usize);

    let right: Vec<Partition> = inst
        .b()
        .iter()
        .map(row)
        .chain([Partition::rectangle(m * p, total)])
        .collect();
    let right = expand_product(&right, rank, None, budget)?;
    // terms of the left factor outside every right-hand μ contribute nothing
    let hull = right
        .terms()
        .keys()
        .fold(Partition::empty(), |acc, mu| acc.union(mu));

    let left: Vec<Partition> = inst
        .a()
        .iter()
        .map(row)
        .chain(std::iter::repeat_n(Partition::rectangle(m, total), p))
        .collect();
    let left = expand_product(&left, rank, Some(&hull), budget)?;

    Ok(left
        .terms()
        .iter()
        .map(|(mu, k)| k * right.coefficient(mu))
        .sum())
}

/// `Σ_{μ ⊢ N} K_{μ,a} · K_{μ,b}`; only defined for `p = 1`.
pub fn classical_rsk_sum(inst: &TableInstance) -> Result<BigUint> {
    if inst.p() != 1 {
        return Err(Error::InvalidInstance(format!(
            "the RSK sum needs p = 1, got p = {}",
            inst.p()
        )));
    }
    let total = inst.total() as usize;
    let a: Vec<usize> = inst.a().iter().map(|&v| v as usize).collect();
    let b: Vec<usize> = inst.b().iter().map(|&v| v as usize).collect();
    Ok(partitions_bounded(total, inst.m().min(inst.n()), total)
        .iter()
        .map(|mu| kostka_number(mu, &a) * kostka_number(mu, &b))
        .sum())
}

/// Limits for one `verify` run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    /// Search-tree nodes for the flow enumeration.
    pub search_nodes: u64,
    /// Intermediate terms for each expansion-based method.
    pub expansion_terms: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            search_nodes: DEFAULT_SEARCH_BUDGET,
            expansion_terms: DEFAULT_TERM_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Flow,
    Kostka,
    Sum,
    Oracle,
    Rsk,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Flow => "flow",
            Method::Kostka => "kostka",
            Method::Sum => "sum",
            Method::Oracle => "oracle",
            Method::Rsk => "rsk",
        }
    }

    /// Runs one counting route.
    pub fn count(self, inst: &TableInstance, budgets: Budgets) -> Result<BigUint> {
        let mut terms = TermBudget::new(budgets.expansion_terms);
        match self {
            Method::Flow => count_tables(inst, budgets.search_nodes),
            Method::Kostka => parabolic_kostka(&kostka_instance_of(inst), &mut terms),
            Method::Sum => corollary_sum(inst, &mut terms),
            Method::Oracle => tensor_mult_oracle(&kostka_instance_of(inst), &mut terms),
            Method::Rsk => classical_rsk_sum(inst),
        }
    }
}

/// An unbounded count carried as a decimal string in JSON.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Count(pub BigUint);

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_str_radix(10))
    }
}

impl<'de> Deserialize<'de> for Count {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10)
            .filter(|_| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()))
            .map(Count)
            .ok_or_else(|| serde::de::Error::custom(format!("`{s}` is not a decimal count")))
    }
}

/// Per-method counts for one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    #[serde(rename = "N")]
    pub total: u64,
    pub counts: BTreeMap<Method, Count>,
    pub budget_exceeded: Vec<Method>,
    /// True iff every computed count is equal.
    pub agree: bool,
    pub timings_ms: BTreeMap<Method, f64>,
}

impl CountReport {
    /// The common count when all computed methods agree.
    pub fn value(&self) -> Option<&BigUint> {
        if self.agree {
            self.counts.values().next().map(|c| &c.0)
        } else {
            None
        }
    }

    pub fn instance(&self) -> Result<TableInstance> {
        TableInstance::new(self.m, self.n, self.p, self.a.clone(), self.b.clone())
    }
}

#[cfg(not(target_arch = "wasm32"))]
fn timed<T>(f: impl FnOnce() -> T) -> (T, Option<f64>) {
    let start = std::time::Instant::now();
    let out = f();
    (out, Some(start.elapsed().as_secs_f64() * 1e3))
}

#[cfg(target_arch = "wasm32")]
fn timed<T>(f: impl FnOnce() -> T) -> (T, Option<f64>) {
    (f(), None)
}

/// Runs the listed methods and assembles a report. Budget exhaustion is
/// recorded per method; any other error aborts.
pub fn run_methods(
    inst: &TableInstance,
    methods: &[Method],
    budgets: Budgets,
) -> Result<CountReport> {
    let mut counts = BTreeMap::new();
    let mut budget_exceeded = Vec::new();
    let mut timings_ms = BTreeMap::new();
    for &method in methods {
        let (outcome, ms) = timed(|| method.count(inst, budgets));
        if let Some(ms) = ms {
            timings_ms.insert(method, ms);
        }
        match outcome {
            Ok(c) => {
                counts.insert(method, Count(c));
            }
            Err(e) if e.is_budget() => budget_exceeded.push(method),
            Err(e) => return Err(e),
        }
    }
    let mut values = counts.values();
    let agree = match values.next() {
        Some(first) => values.all(|c| c == first),
        None => true,
    };
    Ok(CountReport {
        m: inst.m(),
        n: inst.n(),
        p: inst.p(),
        a: inst.a().to_vec(),
        b: inst.b().to_vec(),
        total: inst.total(),
        counts,
        budget_exceeded,
        agree,
        timings_ms,
    })
}

/// Every route for `inst`: flow enumeration, `K_{λ,ℛ}`, the corollary sum,
/// the RSK sum when `p = 1` and optionally the alternant oracle. The full
/// pipeline trace is rebuilt and checked first.
pub fn verify(inst: &TableInstance, with_oracle: bool, budgets: Budgets) -> Result<CountReport> {
    build_trace(inst)?;
    let mut methods = vec![Method::Flow, Method::Kostka, Method::Sum];
    if with_oracle {
        methods.push(Method::Oracle);
    }
    if inst.p() == 1 {
        methods.push(Method::Rsk);
    }
    run_methods(inst, &methods, budgets)
}

/// All instances with `m ≤ max_m`, `n ≤ max_n`, `p ≤ max_p`, entries at
/// most `max_entry` and `1 ≤ N ≤ max_total`, ordered by `(m, n, p, N, a, b)`.
pub fn sweep_instances(
    max_m: usize,
    max_n: usize,
    max_p: usize,
    max_entry: u64,
    max_total: u64,
) -> Vec<TableInstance> {
    fn compositions(len: usize, total: u64, max_entry: u64) -> Vec<Vec<u64>> {
        if len == 0 {
            return if total == 0 { vec![vec![]] } else { vec![] };
        }
        let mut out = Vec::new();
        for first in 0..=max_entry.min(total) {
            for mut rest in compositions(len - 1, total - first, max_entry) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let mut out = Vec::new();
    for m in 1..=max_m {
        for n in 1..=max_n {
            for p in 1..=max_p {
                for total in 1..=max_total {
                    let bs = compositions(n, total, max_entry);
                    for a in compositions(m, total, max_entry) {
                        for b in &bs {
                            out.push(
                                TableInstance::new(m, n, p, a.clone(), b.clone())
                                    .expect("sweep margins are balanced"),
                            );
                        }
                    }
                }
            }
        }
    }
    out
}

impl Stage {
    /// `σ(β) = Σ_x σ_x β_x`.
    pub fn pairing(&self) -> i64 {
        self.sigma
            .values()
            .iter()
            .zip(self.beta.values())
            .map(|(s, b)| s * b)
            .sum()
    }

    pub fn value(&self, which: VectorKind, label: &str) -> Result<i64> {
        match which {
            VectorKind::Beta => self.quiver.value(&self.beta, label),
            VectorKind::Sigma => self.quiver.value(&self.sigma, label),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VectorKind {
    Beta,
    Sigma,
}
