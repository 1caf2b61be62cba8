//! Composition of unit-vector families along a group extension
//! `1 → N → G → Q → 1`.
//!
//! Given a family `ζ` on the kernel and a family `λ` on the quotient whose
//! vectors live on `ℓ²(Q)`, the composed family on `G` is
//! `ξ_g = Σ_p λ_{π(g)}(p) · e_p ⊗ ζ_{η(g,p)}` with
//! `η(g,p) = σ(p)⁻¹ · g · σ(π(g)⁻¹ p)` for a section `σ: Q → G`.

use serde::{Deserialize, Serialize};

use crate::groups::{FiniteGroup, GroupError, Permutation, QuotientGroupSpec};
use crate::linalg::{dot, norm2};

use super::EmbedError;

const UNIT_TOL: f64 = 1e-12;

/// An extension presented by a group `G` and the images of its generators
/// in a permutation group, which generate the quotient `Q`.
#[derive(Debug, Clone)]
pub struct Extension {
    group: FiniteGroup,
    quotient: FiniteGroup,
    projection: Vec<usize>,
    section: Vec<usize>,
}

impl Extension {
    /// Enumerates `G` and `Q`, checks that the generator images define a
    /// homomorphism, and picks the section `σ(q)` as the shortest coset
    /// element, ties broken by the lexicographically least label.
    pub fn new(
        group: &QuotientGroupSpec,
        quotient_degree: usize,
        images: Vec<Permutation>,
        max_elements: usize,
    ) -> Result<Self, EmbedError> {
        if images.len() != group.generators().len() {
            return Err(GroupError::GeneratorCountMismatch {
                stage: 0,
                expected: group.generators().len(),
                found: images.len(),
            }
            .into());
        }
        let g = FiniteGroup::enumerate(group, max_elements)?;
        let qspec = QuotientGroupSpec::new(quotient_degree, images)?;
        let q = FiniteGroup::enumerate(&qspec, max_elements)?;
        let projection: Vec<usize> = (0..g.order())
            .map(|i| q.evaluate_parent(&g.parent_word(i)))
            .collect();
        let letter_images: Vec<usize> = g
            .letters()
            .iter()
            .map(|l| {
                let gen = l.generator as i64 + 1;
                q.evaluate_parent(&[if l.inverse { -gen } else { gen }])
            })
            .collect();
        for a in 0..g.order() {
            for (li, &img) in letter_images.iter().enumerate() {
                if projection[g.right_mul(a, li)] != q.mul(projection[a], img) {
                    return Err(GroupError::NotAHomomorphism.into());
                }
            }
        }
        let section = (0..q.order())
            .map(|qi| {
                (0..g.order())
                    .filter(|&a| projection[a] == qi)
                    .min_by(|&a, &b| {
                        g.length(a)
                            .cmp(&g.length(b))
                            .then_with(|| g.label(a).cmp(&g.label(b)))
                    })
                    .expect("projection is onto")
            })
            .collect();
        Ok(Self {
            group: g,
            quotient: q,
            projection,
            section,
        })
    }

    /// Replaces the section; each `σ(q)` must project to `q` and `σ(e) = e`.
    pub fn with_section(mut self, section: Vec<usize>) -> Result<Self, EmbedError> {
        if section.len() != self.quotient.order() {
            return Err(EmbedError::SectionInvalid(format!(
                "expected {} entries, got {}",
                self.quotient.order(),
                section.len()
            )));
        }
        for (qi, &s) in section.iter().enumerate() {
            if s >= self.group.order() || self.projection[s] != qi {
                return Err(EmbedError::SectionInvalid(format!(
                    "entry {qi} does not lie over {}",
                    self.quotient.label(qi)
                )));
            }
        }
        if section[FiniteGroup::IDENTITY] != FiniteGroup::IDENTITY {
            return Err(EmbedError::SectionInvalid("σ(e) must be e".into()));
        }
        self.section = section;
        Ok(self)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn quotient(&self) -> &FiniteGroup {
        &self.quotient
    }

    pub fn project(&self, g: usize) -> usize {
        self.projection[g]
    }

    pub fn section(&self, q: usize) -> usize {
        self.section[q]
    }

    pub fn kernel(&self) -> Vec<usize> {
        (0..self.group.order())
            .filter(|&g| self.projection[g] == FiniteGroup::IDENTITY)
            .collect()
    }

    /// `η(g,p) = σ(p)⁻¹ · g · σ(π(g)⁻¹ p)`, always an element of the kernel.
    pub fn eta(&self, g: usize, p: usize) -> Result<usize, EmbedError> {
        let (gr, q) = (&self.group, &self.quotient);
        let shifted = q.mul(q.inv(self.projection[g]), p);
        let eta = gr.mul(gr.mul(gr.inv(self.section[p]), g), self.section[shifted]);
        if self.projection[eta] != FiniteGroup::IDENTITY {
            return Err(EmbedError::NotInKernel(eta));
        }
        Ok(eta)
    }
}

/// A family of unit vectors indexed by group elements, with a declared
/// support radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelFamily {
    pub base: Vec<usize>,
    pub vectors: Vec<Vec<f64>>,
    pub support_radius: f64,
}

impl KernelFamily {
    fn dim(&self) -> Result<usize, EmbedError> {
        let d = self.vectors.first().map_or(0, Vec::len);
        if self.base.len() != self.vectors.len() || self.vectors.iter().any(|v| v.len() != d) {
            return Err(EmbedError::DimensionMismatch(
                "family base and vectors disagree".into(),
            ));
        }
        for (index, v) in self.vectors.iter().enumerate() {
            let norm = norm2(v);
            if (norm - 1.0).abs() > UNIT_TOL {
                return Err(EmbedError::NotUnit { index, norm });
            }
        }
        Ok(d)
    }

    fn lookup(&self, element: usize) -> Option<&[f64]> {
        self.base
            .iter()
            .position(|&b| b == element)
            .map(|k| self.vectors[k].as_slice())
    }
}

/// The composed family `ξ` on `G`, one vector per element, laid out as
/// `|Q|` consecutive blocks of the kernel family's dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComposedFamily {
    pub vectors: Vec<Vec<f64>>,
    pub block_dim: usize,
}

impl ComposedFamily {
    pub fn inner(&self, a: usize, b: usize) -> f64 {
        dot(&self.vectors[a], &self.vectors[b])
    }
}

/// Builds `ξ_g = Σ_p λ_{π(g)}(p) · e_p ⊗ ζ_{η(g,p)}`.
///
/// `lambda` must have one vector per quotient element, each of length `|Q|`
/// and supported within `support_radius` of its base point. `zeta` must be
/// based on kernel elements and defined at every `η(g,p)` that receives
/// non-zero weight.
pub fn extension_compose(
    ext: &Extension,
    zeta: &KernelFamily,
    lambda: &KernelFamily,
) -> Result<ComposedFamily, EmbedError> {
    let q = ext.quotient();
    let qn = q.order();
    let zdim = zeta.dim()?;
    let ldim = lambda.dim()?;
    if ldim != qn {
        return Err(EmbedError::DimensionMismatch(format!(
            "quotient family has dimension {ldim}, quotient has {qn} elements"
        )));
    }
    let mut lam_by_q: Vec<Option<&[f64]>> = vec![None; qn];
    for (&b, v) in lambda.base.iter().zip(&lambda.vectors) {
        if b >= qn {
            return Err(EmbedError::DimensionMismatch(format!(
                "quotient family base {b} out of range"
            )));
        }
        for (p, &x) in v.iter().enumerate() {
            if x != 0.0 && q.distance(b, p) as f64 > lambda.support_radius {
                return Err(EmbedError::SupportRadiusExceeded(format!(
                    "λ_{} is non-zero at {}, beyond radius {}",
                    q.label(b),
                    q.label(p),
                    lambda.support_radius
                )));
            }
        }
        lam_by_q[b] = Some(v);
    }
    for &k in &zeta.base {
        if ext.project(k) != FiniteGroup::IDENTITY {
            return Err(EmbedError::NotInKernel(k));
        }
    }
    let g = ext.group();
    let mut vectors = Vec::with_capacity(g.order());
    for a in 0..g.order() {
        let qa = ext.project(a);
        let lam = lam_by_q[qa].ok_or_else(|| {
            EmbedError::DimensionMismatch(format!(
                "quotient family missing {}",
                q.label(qa)
            ))
        })?;
        let mut xi = vec![0.0; qn * zdim];
        for p in 0..qn {
            if lam[p] == 0.0 {
                continue;
            }
            let eta = ext.eta(a, p)?;
            let z = zeta.lookup(eta).ok_or_else(|| {
                EmbedError::SupportRadiusExceeded(format!(
                    "kernel family undefined at {}",
                    g.label(eta)
                ))
            })?;
            for (k, &zk) in z.iter().enumerate() {
                xi[p * zdim + k] = lam[p] * zk;
            }
        }
        vectors.push(xi);
    }
    Ok(ComposedFamily {
        vectors,
        block_dim: zdim,
    })
}
