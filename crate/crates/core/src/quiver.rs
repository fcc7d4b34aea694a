//! Finite acyclic quivers with labelled vertices, integer vectors on their
//! vertex sets, and the arithmetic that moves weight spaces between
//! quivers: Euler form, reflections at sources and sinks, removal of a
//! zero-weight vertex, and exceptional-sequence quivers.

use std::collections::{BTreeMap, HashSet};
use std::ops::{Add, Index};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "QuiverDoc", into = "QuiverDoc")]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<(usize, usize)>,
}

/// Debug dump layout: `{"vertices": [...], "arrows": [[tail, head], ...]}`.
#[derive(Serialize, Deserialize)]
struct QuiverDoc {
    vertices: Vec<String>,
    arrows: Vec<(String, String)>,
}

impl From<Quiver> for QuiverDoc {
    fn from(q: Quiver) -> Self {
        let arrows = q
            .arrows
            .iter()
            .map(|&(t, h)| (q.vertices[t].clone(), q.vertices[h].clone()))
            .collect();
        QuiverDoc {
            vertices: q.vertices,
            arrows,
        }
    }
}

impl TryFrom<QuiverDoc> for Quiver {
    type Error = Error;

    fn try_from(doc: QuiverDoc) -> Result<Self> {
        Quiver::new(doc.vertices, doc.arrows)
    }
}

impl Quiver {
    /// Builds a quiver from vertex labels and `(tail, head)` label pairs.
    /// Rejects duplicate labels, dangling arrows, directed cycles and
    /// disconnected quivers.
    pub fn new<S: Into<String>>(
        vertices: impl IntoIterator<Item = S>,
        arrows: impl IntoIterator<Item = (S, S)>,
    ) -> Result<Self> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let index: BTreeMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        if index.len() != vertices.len() {
            return Err(Error::InvalidQuiver("duplicate vertex label".into()));
        }
        let mut idx = Vec::new();
        for (t, h) in arrows {
            let (t, h): (String, String) = (t.into(), h.into());
            let ti = *index
                .get(t.as_str())
                .ok_or_else(|| Error::UnknownVertex(t.clone()))?;
            let hi = *index
                .get(h.as_str())
                .ok_or_else(|| Error::UnknownVertex(h.clone()))?;
            idx.push((ti, hi));
        }
        Quiver::from_indices(vertices, idx)
    }

    pub fn from_indices(vertices: Vec<String>, arrows: Vec<(usize, usize)>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidQuiver("no vertices".into()));
        }
        let n = vertices.len();
        if vertices.iter().collect::<HashSet<_>>().len() != n {
            return Err(Error::InvalidQuiver("duplicate vertex label".into()));
        }
        if let Some(&(t, h)) = arrows.iter().find(|&&(t, h)| t >= n || h >= n) {
            return Err(Error::InvalidQuiver(format!(
                "arrow ({t}, {h}) out of range"
            )));
        }
        let q = Quiver { vertices, arrows };
        if q.topological_order().is_none() {
            return Err(Error::InvalidQuiver("contains a directed cycle".into()));
        }
        if !q.is_weakly_connected() {
            return Err(Error::InvalidQuiver("not connected".into()));
        }
        Ok(q)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn label(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.arrows.iter().filter(|a| a.0 == i).count()
    }

    pub fn in_degree(&self, i: usize) -> usize {
        self.arrows.iter().filter(|a| a.1 == i).count()
    }

    pub fn is_source(&self, i: usize) -> bool {
        self.in_degree(i) == 0
    }

    pub fn is_sink(&self, i: usize) -> bool {
        self.out_degree(i) == 0
    }

    /// Number of arrows between `i` and `j` in either direction.
    pub fn edges_between(&self, i: usize, j: usize) -> usize {
        self.arrows
            .iter()
            .filter(|&&(t, h)| (t == i && h == j) || (t == j && h == i))
            .count()
    }

    /// `m[i][j]` = number of arrows `i → j`.
    pub fn arrow_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut m = vec![vec![0; n]; n];
        for &(t, h) in &self.arrows {
            m[t][h] += 1;
        }
        m
    }

    /// Kahn's algorithm, smallest index first; `None` on a directed cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.vertex_count();
        let mut indeg = vec![0usize; n];
        for &(_, h) in &self.arrows {
            indeg[h] += 1;
        }
        let mut ready: Vec<usize> = (0..n).rev().filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            order.push(v);
            for &(t, h) in &self.arrows {
                if t == v {
                    indeg[h] -= 1;
                    if indeg[h] == 0 {
                        ready.push(h);
                    }
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    fn is_weakly_connected(&self) -> bool {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(t, h) in &self.arrows {
                let other = if t == v {
                    h
                } else if h == v {
                    t
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    stack.push(other);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn rename_vertex(&self, from: &str, to: &str) -> Result<Quiver> {
        let i = self.index_of(from)?;
        if from != to && self.vertices.iter().any(|v| v == to) {
            return Err(Error::InvalidQuiver(format!("label `{to}` already in use")));
        }
        let mut q = self.clone();
        q.vertices[i] = to.to_string();
        Ok(q)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("quiver serializes")
    }

    pub fn zeros(&self) -> IntVector {
        IntVector(vec![0; self.vertex_count()])
    }

    pub fn ones(&self) -> IntVector {
        IntVector(vec![1; self.vertex_count()])
    }

    /// `e_x`.
    pub fn simple(&self, label: &str) -> Result<IntVector> {
        let i = self.index_of(label)?;
        Ok(IntVector::simple(self.vertex_count(), i))
    }

    /// Builds a vector from `(label, value)` pairs; unlisted vertices are 0.
    pub fn vector<'a>(
        &self,
        values: impl IntoIterator<Item = (&'a str, i64)>,
    ) -> Result<IntVector> {
        let mut v = self.zeros();
        for (label, value) in values {
            v.0[self.index_of(label)?] = value;
        }
        Ok(v)
    }

    pub fn value(&self, v: &IntVector, label: &str) -> Result<i64> {
        Ok(v[self.index_of(label)?])
    }

    fn check_len(&self, v: &IntVector, what: &str) -> Result<()> {
        if v.len() == self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVector(format!(
                "{what} has {} entries, quiver has {} vertices",
                v.len(),
                self.vertex_count()
            )))
        }
    }
}

/// An integer per vertex, in the quiver's vertex order. Serves as dimension
/// vector, weight, or sequence coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntVector(pub Vec<i64>);

impl IntVector {
    pub fn simple(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        IntVector(v)
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_dimension_vector(&self) -> bool {
        self.0.iter().all(|&v| v >= 0)
    }

    pub fn is_sincere(&self) -> bool {
        self.0.iter().all(|&v| v > 0)
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn scale(&self, k: i64) -> IntVector {
        IntVector(self.0.iter().map(|v| v * k).collect())
    }

    /// Drops entry `i`.
    pub fn without(&self, i: usize) -> IntVector {
        let mut v = self.0.clone();
        v.remove(i);
        IntVector(v)
    }
}

impl Index<usize> for IntVector {
    type Output = i64;

    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Add for &IntVector {
    type Output = IntVector;

    fn add(self, rhs: &IntVector) -> IntVector {
        assert_eq!(self.len(), rhs.len(), "vector lengths differ");
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

/// `⟨α,β⟩ = Σ_x α_x β_x − Σ_a α_{ta} β_{ha}`.
pub fn euler_form(q: &Quiver, alpha: &IntVector, beta: &IntVector) -> i64 {
    assert_eq!(
        alpha.len(),
        q.vertex_count(),
        "alpha does not match the quiver"
    );
    assert_eq!(
        beta.len(),
        q.vertex_count(),
        "beta does not match the quiver"
    );
    let diag: i64 = alpha.0.iter().zip(&beta.0).map(|(a, b)| a * b).sum();
    let off: i64 = q.arrows.iter().map(|&(t, h)| alpha[t] * beta[h]).sum();
    diag - off
}

/// The weight `σ_x = ⟨α, e_x⟩`.
pub fn weight_of(q: &Quiver, alpha: &IntVector) -> IntVector {
    let n = q.vertex_count();
    IntVector(
        (0..n)
            .map(|x| euler_form(q, alpha, &IntVector::simple(n, x)))
            .collect(),
    )
}

/// The unique `α` with `weight_of(q, α) = σ`, solved in topological order.
pub fn dimvector_of_weight(q: &Quiver, sigma: &IntVector) -> IntVector {
    assert_eq!(
        sigma.len(),
        q.vertex_count(),
        "sigma does not match the quiver"
    );
    let mut alpha = vec![0i64; q.vertex_count()];
    let order = q.topological_order().expect("quivers are acyclic");
    for x in order {
        let incoming: i64 = q
            .arrows
            .iter()
            .filter(|a| a.1 == x)
            .map(|a| alpha[a.0])
            .sum();
        alpha[x] = sigma[x] + incoming;
    }
    IntVector(alpha)
}

/// Reflection `s_x` at a source or sink: reverses the arrows at `x` and
/// transforms `β` and `σ`. The returned dimension vector may have negative
/// entries; callers decide whether that is legal for their use.
pub fn reflect(
    q: &Quiver,
    beta: &IntVector,
    sigma: &IntVector,
    x: &str,
) -> Result<(Quiver, IntVector, IntVector)> {
    q.check_len(beta, "beta")?;
    q.check_len(sigma, "sigma")?;
    let xi = q.index_of(x)?;
    if !q.is_source(xi) && !q.is_sink(xi) {
        return Err(Error::NotSourceOrSink(x.to_string()));
    }
    let arrows = q
        .arrows
        .iter()
        .map(|&(t, h)| if t == xi || h == xi { (h, t) } else { (t, h) })
        .collect();
    let reflected = Quiver {
        vertices: q.vertices.clone(),
        arrows,
    };

    let n = q.vertex_count();
    let mut new_beta = beta.clone();
    new_beta.0[xi] = -beta[xi]
        + (0..n)
            .filter(|&z| z != xi)
            .map(|z| q.edges_between(xi, z) as i64 * beta[z])
            .sum::<i64>();

    let mut new_sigma = sigma.clone();
    for y in 0..n {
        new_sigma.0[y] = if y == xi {
            -sigma[xi]
        } else {
            sigma[y] + sigma[xi] * q.edges_between(xi, y) as i64
        };
    }
    Ok((reflected, new_beta, new_sigma))
}

/// Deletes a zero-weight vertex `v0` whose only outgoing arrow is
/// `b: v0 → w`, replacing each `a_i: v_i → v0` by the composite
/// `b·a_i: v_i → w`. `β` and `σ` are restricted.
pub fn remove_zero_weight_vertex(
    q: &Quiver,
    beta: &IntVector,
    sigma: &IntVector,
    v0: &str,
) -> Result<(Quiver, IntVector, IntVector)> {
    q.check_len(beta, "beta")?;
    q.check_len(sigma, "sigma")?;
    let vi = q.index_of(v0)?;
    let violated = |reason: String| Error::PreconditionViolated {
        vertex: v0.to_string(),
        reason,
    };

    let outgoing: Vec<usize> = q.arrows.iter().filter(|a| a.0 == vi).map(|a| a.1).collect();
    let w = match outgoing.as_slice() {
        [w] => *w,
        other => {
            return Err(violated(format!(
                "needs exactly one outgoing arrow, has {}",
                other.len()
            )))
        }
    };
    if sigma[vi] != 0 {
        return Err(violated(format!("weight is {}, not 0", sigma[vi])));
    }
    if beta[vi] < beta[w] {
        return Err(violated(format!(
            "dimension {} is below dimension {} at `{}`",
            beta[vi],
            beta[w],
            q.label(w)
        )));
    }

    let shift = |i: usize| if i > vi { i - 1 } else { i };
    let arrows: Vec<(usize, usize)> = q
        .arrows
        .iter()
        .filter(|a| a.0 != vi)
        .map(|&(t, h)| {
            if h == vi {
                (shift(t), shift(w))
            } else {
                (shift(t), shift(h))
            }
        })
        .collect();
    let mut vertices = q.vertices.clone();
    vertices.remove(vi);
    let reduced = Quiver::from_indices(vertices, arrows)?;
    Ok((reduced, beta.without(vi), sigma.without(vi)))
}

/// A candidate exceptional sequence `(ε_1, …, ε_N)` of dimension vectors
/// on `ambient`. Only the Euler-form conditions are ever checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalSequenceData {
    ambient: Quiver,
    epsilons: Vec<IntVector>,
}

impl ExceptionalSequenceData {
    pub fn new(ambient: Quiver, epsilons: Vec<IntVector>) -> Result<Self> {
        if epsilons.is_empty() {
            return Err(Error::NotExceptional("sequence is empty".into()));
        }
        for (i, e) in epsilons.iter().enumerate() {
            ambient.check_len(e, "epsilon")?;
            if !e.is_dimension_vector() {
                return Err(Error::NotExceptional(format!(
                    "entry {} has a negative value",
                    i + 1
                )));
            }
        }
        Ok(ExceptionalSequenceData { ambient, epsilons })
    }

    pub fn ambient(&self) -> &Quiver {
        &self.ambient
    }

    pub fn epsilons(&self) -> &[IntVector] {
        &self.epsilons
    }

    pub fn len(&self) -> usize {
        self.epsilons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epsilons.is_empty()
    }

    /// `⟨ε_i, ε_j⟩` on the ambient quiver, 0-based.
    pub fn pairing(&self, i: usize, j: usize) -> i64 {
        euler_form(&self.ambient, &self.epsilons[i], &self.epsilons[j])
    }

    /// `⟨ε_i,ε_i⟩ = 1` and `⟨ε_i,ε_j⟩ ≤ 0` for `i < j`.
    pub fn check_euler_conditions(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            let d = self.pairing(i, i);
            if d != 1 {
                return Err(Error::NotExceptional(format!(
                    "<e{0},e{0}> = {d}, expected 1",
                    i + 1
                )));
            }
            for j in i + 1..n {
                let v = self.pairing(i, j);
                if v > 0 {
                    return Err(Error::NotExceptional(format!(
                        "<e{},e{}> = {v} is positive",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `Q(ℰ)`: vertices `"1".."N"` with `−⟨ε_i,ε_j⟩` arrows `i → j` wherever
/// that number is positive.
pub fn quiver_of_sequence(seq: &ExceptionalSequenceData) -> Result<Quiver> {
    seq.check_euler_conditions()?;
    let n = seq.len();
    let mut arrows = Vec::new();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let count = (-seq.pairing(i, j)).max(0) as usize;
            arrows.extend(std::iter::repeat_n((i, j), count));
        }
    }
    Quiver::from_indices((1..=n).map(|i| i.to_string()).collect(), arrows)
}

/// `I(γ) = Σ_i γ_i ε_i`.
pub fn embed(seq: &ExceptionalSequenceData, gamma: &IntVector) -> IntVector {
    assert_eq!(
        gamma.len(),
        seq.len(),
        "gamma needs one coordinate per sequence entry"
    );
    let mut out = seq.ambient.zeros();
    for (g, e) in gamma.0.iter().zip(&seq.epsilons) {
        out = &out + &e.scale(*g);
    }
    out
}
