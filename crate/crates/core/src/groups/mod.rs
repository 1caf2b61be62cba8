//! Finite quotient groups as word-metric spaces, filtrations and box spaces.
//!
//! A quotient `Γ/Γ_i` is presented concretely by the permutation images of
//! the generators of `Γ`. Normality and nestedness of the kernels are the
//! caller's assertion; what is checked is the observable consequence, a
//! non-decreasing injectivity radius along the filtration.

mod parent;
mod perm;

pub use parent::{injectivity_radius, ParentGroup, ParentWord, DEFAULT_DEPTH_CAP};
pub use perm::Permutation;

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::{coarse_disjoint_union, BlockMeta, BlockSpace, FiniteMetricSpace, MetricError};
use crate::spectral::FiniteGraph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("not a permutation: {0:?}")]
    NotABijection(Vec<usize>),
    #[error("generator {index} has degree {found}, expected {expected}")]
    DegreeMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("group order exceeds the limit of {0} elements")]
    OrderExceeded(usize),
    #[error("no nontrivial kernel word up to length {lower_bound_minus_one}; injectivity radius is at least {}", lower_bound_minus_one + 1)]
    DepthCapReached { lower_bound_minus_one: usize },
    #[error("filtration stage {stage} has {found} generators, expected {expected}")]
    GeneratorCountMismatch {
        stage: usize,
        expected: usize,
        found: usize,
    },
    #[error("injectivity radius drops from {previous} to {current} at stage {stage}")]
    NonMonotoneRadius {
        stage: usize,
        previous: usize,
        current: usize,
    },
    #[error("parent group has rank {parent}, quotient has {quotient} generators")]
    RankMismatch { parent: usize, quotient: usize },
    #[error("generator images of a free abelian parent must commute")]
    NonCommutingImages,
    #[error("generator images do not define a homomorphism")]
    NotAHomomorphism,
    #[error("empty filtration")]
    EmptyFiltration,
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// A finite quotient, presented by permutation images of the generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGroupSpec", into = "RawGroupSpec")]
pub struct QuotientGroupSpec {
    degree: usize,
    generators: Vec<Permutation>,
    symmetric_closure: bool,
}

#[derive(Serialize, Deserialize)]
struct RawGroupSpec {
    degree: usize,
    generators: Vec<Permutation>,
    #[serde(default = "yes")]
    symmetric_closure: bool,
}

fn yes() -> bool {
    true
}

impl TryFrom<RawGroupSpec> for QuotientGroupSpec {
    type Error = GroupError;

    fn try_from(raw: RawGroupSpec) -> Result<Self, GroupError> {
        let mut spec = QuotientGroupSpec::new(raw.degree, raw.generators)?;
        spec.symmetric_closure = raw.symmetric_closure;
        Ok(spec)
    }
}

impl From<QuotientGroupSpec> for RawGroupSpec {
    fn from(s: QuotientGroupSpec) -> Self {
        RawGroupSpec {
            degree: s.degree,
            generators: s.generators,
            symmetric_closure: s.symmetric_closure,
        }
    }
}

impl QuotientGroupSpec {
    /// Generators are closed under inverses by default.
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, GroupError> {
        for (index, g) in generators.iter().enumerate() {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch {
                    index,
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        Ok(Self {
            degree,
            generators,
            symmetric_closure: true,
        })
    }

    /// `Z/n` generated by the unit shift.
    pub fn cyclic(n: usize) -> Self {
        Self::new(n, vec![Permutation::shift(n, 1)]).expect("shift has degree n")
    }

    pub fn without_closure(mut self) -> Self {
        self.symmetric_closure = false;
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn symmetric_closure(&self) -> bool {
        self.symmetric_closure
    }

    /// Generating letters after closure: every generator, then the inverse of
    /// each generator whose inverse is not already present.
    pub fn letters(&self) -> Vec<Letter> {
        let mut letters: Vec<Letter> = (0..self.generators.len())
            .map(|generator| Letter {
                generator,
                inverse: false,
            })
            .collect();
        if self.symmetric_closure {
            let mut present: Vec<Permutation> = self.generators.clone();
            for (generator, g) in self.generators.iter().enumerate() {
                let inv = g.inverse();
                if !present.contains(&inv) {
                    present.push(inv);
                    letters.push(Letter {
                        generator,
                        inverse: true,
                    });
                }
            }
        }
        letters
    }

    pub fn letter_perm(&self, letter: Letter) -> Permutation {
        let g = &self.generators[letter.generator];
        if letter.inverse {
            g.inverse()
        } else {
            g.clone()
        }
    }
}

/// A generator or the inverse of one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    /// `a, b, c, …` for generators and `A, B, C, …` for inverses; generators
    /// past the 26th are written `x27`/`X27`.
    pub fn symbol(&self) -> String {
        if self.generator < 26 {
            let base = if self.inverse { b'A' } else { b'a' };
            ((base + self.generator as u8) as char).to_string()
        } else if self.inverse {
            format!("X{}", self.generator + 1)
        } else {
            format!("x{}", self.generator + 1)
        }
    }
}

/// An enumerated finite permutation group with canonical words.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    spec: QuotientGroupSpec,
    letters: Vec<Letter>,
    letter_perms: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    words: Vec<Vec<usize>>,
    right: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Breadth-first enumeration from the identity by right multiplication,
    /// expanding letters in order, so each element's first word is the
    /// shortlex-least geodesic.
    pub fn enumerate(spec: &QuotientGroupSpec, max_elements: usize) -> Result<Self, GroupError> {
        let letters = spec.letters();
        let letter_perms: Vec<Permutation> = letters.iter().map(|&l| spec.letter_perm(l)).collect();
        let id = Permutation::identity(spec.degree());
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        let mut right: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        if max_elements == 0 {
            return Err(GroupError::OrderExceeded(0));
        }
        while let Some(g) = queue.pop_front() {
            let mut row = Vec::with_capacity(letters.len());
            for (li, lp) in letter_perms.iter().enumerate() {
                let h = elements[g].then(lp);
                let hi = match index.get(&h) {
                    Some(&hi) => hi,
                    None => {
                        if elements.len() >= max_elements {
                            return Err(GroupError::OrderExceeded(max_elements));
                        }
                        let hi = elements.len();
                        let mut w = words[g].clone();
                        w.push(li);
                        index.insert(h.clone(), hi);
                        elements.push(h);
                        words.push(w);
                        queue.push_back(hi);
                        hi
                    }
                };
                row.push(hi);
            }
            right.resize(right.len().max(g + 1), Vec::new());
            right[g] = row;
        }
        Ok(Self {
            spec: spec.clone(),
            letters,
            letter_perms,
            elements,
            index,
            words,
            right,
        })
    }

    pub fn spec(&self) -> &QuotientGroupSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub const IDENTITY: usize = 0;

    /// Canonical word of element `i` as letter indices.
    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    /// Word length `|g|`.
    pub fn length(&self, i: usize) -> usize {
        self.words[i].len()
    }

    pub fn label(&self, i: usize) -> String {
        if self.words[i].is_empty() {
            "e".to_string()
        } else {
            self.words[i]
                .iter()
                .map(|&l| self.letters[l].symbol())
                .collect()
        }
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].then(&self.elements[b])]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.index[&self.elements[a].inverse()]
    }

    /// `g · letter`.
    pub fn right_mul(&self, g: usize, letter: usize) -> usize {
        self.right[g][letter]
    }

    /// Word metric `|a⁻¹ b|`.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.length(self.mul(self.inv(a), b))
    }

    /// Evaluates a word of letter indices.
    pub fn evaluate(&self, word: &[usize]) -> usize {
        word.iter().fold(Self::IDENTITY, |g, &l| self.right_mul(g, l))
    }

    /// Evaluates a parent word, letters `±(generator + 1)`.
    pub fn evaluate_parent(&self, word: &[i64]) -> usize {
        let mut p = Permutation::identity(self.spec.degree());
        for &l in word {
            let g = &self.spec.generators()[(l.unsigned_abs() - 1) as usize];
            p = if l > 0 { p.then(g) } else { p.then(&g.inverse()) };
        }
        self.index[&p]
    }

    /// Undirected Cayley graph for the closed generating set.
    pub fn cayley_graph(&self) -> FiniteGraph {
        let edges = (0..self.order()).flat_map(|g| {
            self.right[g]
                .iter()
                .filter(move |&&h| h != g)
                .map(move |&h| (g, h))
        });
        FiniteGraph::new(self.order(), edges.collect::<Vec<_>>()).expect("Cayley edges are valid")
    }

    /// Letters of the canonical word of `i`, as parent letters `±(gen + 1)`.
    pub fn parent_word(&self, i: usize) -> Vec<i64> {
        self.words[i]
            .iter()
            .map(|&l| {
                let letter = self.letters[l];
                let g = letter.generator as i64 + 1;
                if letter.inverse {
                    -g
                } else {
                    g
                }
            })
            .collect()
    }

    pub fn letter_perm(&self, l: usize) -> &Permutation {
        &self.letter_perms[l]
    }
}

/// The quotient as a metric space: points are group elements labeled by
/// their canonical words, distances are the word metric.
pub fn word_metric_space(
    spec: &QuotientGroupSpec,
    max_elements: usize,
) -> Result<FiniteMetricSpace, GroupError> {
    let group = FiniteGroup::enumerate(spec, max_elements)?;
    group_metric(&group)
}

pub(crate) fn group_metric(group: &FiniteGroup) -> Result<FiniteMetricSpace, GroupError> {
    let graph = group.cayley_graph();
    let labels = (0..group.order()).map(|i| group.label(i)).collect();
    let space = if group.order() == 1 {
        crate::metric::validate_metric(&[vec![0.0]])?
    } else {
        graph.metric().expect("Cayley graphs are connected")
    };
    Ok(space.with_labels(labels)?)
}

/// Stages of a filtration `Γ ⊃ Γ_1 ⊃ Γ_2 ⊃ …`, each given by its quotient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiltrationSpec {
    pub parent: ParentGroup,
    pub stages: Vec<QuotientGroupSpec>,
}

/// Per-stage data computed while building a box space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageSummary {
    pub order: usize,
    pub injectivity_radius: usize,
    pub diameter: f64,
}

/// Builds the box space of a filtration: blocks are the word-metric spaces
/// of the stages, in order, annotated with their injectivity radii and
/// Cayley graphs.
pub fn box_space_build(
    filtration: &FiltrationSpec,
    max_elements: usize,
) -> Result<(BlockSpace, Vec<StageSummary>), GroupError> {
    let Some(first) = filtration.stages.first() else {
        return Err(GroupError::EmptyFiltration);
    };
    let expected = first.generators().len();
    let mut blocks = Vec::new();
    let mut meta = Vec::new();
    let mut summaries: Vec<StageSummary> = Vec::new();
    for (stage, spec) in filtration.stages.iter().enumerate() {
        if spec.generators().len() != expected {
            return Err(GroupError::GeneratorCountMismatch {
                stage,
                expected,
                found: spec.generators().len(),
            });
        }
        let group = FiniteGroup::enumerate(spec, max_elements)?;
        let radius = injectivity_radius(&filtration.parent, &group, DEFAULT_DEPTH_CAP)?;
        if let Some(prev) = summaries.last() {
            if radius < prev.injectivity_radius {
                return Err(GroupError::NonMonotoneRadius {
                    stage,
                    previous: prev.injectivity_radius,
                    current: radius,
                });
            }
        }
        let space = group_metric(&group)?;
        summaries.push(StageSummary {
            order: group.order(),
            injectivity_radius: radius,
            diameter: space.diameter(),
        });
        meta.push(BlockMeta {
            injectivity_radius: Some(radius as f64),
            graph: (group.order() > 1).then(|| group.cayley_graph()),
        });
        blocks.push(space);
    }
    let space = coarse_disjoint_union(blocks)?.with_meta(meta)?;
    Ok((space, summaries))
}
