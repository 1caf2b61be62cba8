use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{FiniteGroup, GroupError, Permutation};

/// Default cap on kernel-word length searched by [`injectivity_radius`].
pub const DEFAULT_DEPTH_CAP: usize = 256;

/// Word over the parent generators: letter `k > 0` is generator `k - 1`,
/// `-k` its inverse.
pub type ParentWord = Vec<i64>;

/// The group whose finite quotients form a filtration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ParentGroup {
    /// Free group; rank 1 is `Z`.
    Free { rank: usize },
    /// `Z^rank` with the ℓ¹ word length.
    FreeAbelian { rank: usize },
}

impl ParentGroup {
    pub fn rank(&self) -> usize {
        match *self {
            ParentGroup::Free { rank } | ParentGroup::FreeAbelian { rank } => rank,
        }
    }

    /// Normal form: free reduction, or sorted exponent-sum form for `Z^r`.
    pub fn normalize(&self, word: &[i64]) -> ParentWord {
        match self {
            ParentGroup::Free { .. } => {
                let mut out: Vec<i64> = Vec::with_capacity(word.len());
                for &l in word {
                    if out.last() == Some(&-l) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                out
            }
            ParentGroup::FreeAbelian { rank } => {
                let mut sums = vec![0i64; *rank];
                for &l in word {
                    sums[(l.unsigned_abs() - 1) as usize] += l.signum();
                }
                sums.iter()
                    .enumerate()
                    .flat_map(|(g, &s)| {
                        let letter = if s >= 0 { g as i64 + 1 } else { -(g as i64 + 1) };
                        std::iter::repeat(letter).take(s.unsigned_abs() as usize)
                    })
                    .collect()
            }
        }
    }

    pub fn length(&self, word: &[i64]) -> usize {
        self.normalize(word).len()
    }

    /// Word-metric distance `|a⁻¹ b|` in the parent group.
    pub fn distance(&self, a: &[i64], b: &[i64]) -> usize {
        let mut w: Vec<i64> = a.iter().rev().map(|l| -l).collect();
        w.extend_from_slice(b);
        self.length(&w)
    }

    /// Lifts the ball of radius `radius` around `center` in the quotient:
    /// each element `g` maps to the canonical geodesic word of `center⁻¹ g`.
    pub fn lift_ball(&self, group: &FiniteGroup, center: usize, radius: usize) -> Vec<(usize, ParentWord)> {
        let cinv = group.inv(center);
        (0..group.order())
            .filter(|&g| group.distance(center, g) <= radius)
            .map(|g| (g, group.parent_word(group.mul(cinv, g))))
            .collect()
    }

    /// True when the lift of the ball is an isometry onto its image.
    pub fn lift_is_isometric(&self, group: &FiniteGroup, center: usize, radius: usize) -> bool {
        let lift = self.lift_ball(group, center, radius);
        lift.iter().all(|(g, wg)| {
            lift.iter()
                .all(|(h, wh)| group.distance(*g, *h) == self.distance(wg, wh))
        })
    }
}

fn letter_perm(group: &FiniteGroup, letter: i64) -> Permutation {
    let g = &group.spec().generators()[(letter.unsigned_abs() - 1) as usize];
    if letter > 0 {
        g.clone()
    } else {
        g.inverse()
    }
}

/// Length of the shortest nontrivial parent word mapping to the identity.
///
/// For a free parent this is a breadth-first search over
/// (element, last letter) states, i.e. over reduced words. For `Z^r` it
/// enumerates integer vectors by increasing ℓ¹ norm. Searches stop at
/// `depth_cap` with [`GroupError::DepthCapReached`].
pub fn injectivity_radius(
    parent: &ParentGroup,
    group: &FiniteGroup,
    depth_cap: usize,
) -> Result<usize, GroupError> {
    let gens = group.spec().generators().len();
    if parent.rank() != gens {
        return Err(GroupError::RankMismatch {
            parent: parent.rank(),
            quotient: gens,
        });
    }
    match parent {
        ParentGroup::Free { .. } => free_radius(group, depth_cap),
        ParentGroup::FreeAbelian { .. } => abelian_radius(group, depth_cap),
    }
}

fn free_radius(group: &FiniteGroup, depth_cap: usize) -> Result<usize, GroupError> {
    let rank = group.spec().generators().len() as i64;
    let letters: Vec<i64> = (1..=rank).flat_map(|g| [g, -g]).collect();
    let table: Vec<Vec<usize>> = (0..group.order())
        .map(|g| {
            letters
                .iter()
                .map(|&l| {
                    let p = group.element(g).then(&letter_perm(group, l));
                    group.index_of(&p).expect("closed under generators")
                })
                .collect()
        })
        .collect();
    let nl = letters.len();
    let inverse_slot = |li: usize| li ^ 1;
    // state = element * nl + index of the last letter
    let mut dist = vec![usize::MAX; group.order() * nl];
    let mut queue = VecDeque::new();
    for (li, &h) in table[FiniteGroup::IDENTITY].iter().enumerate() {
        if h == FiniteGroup::IDENTITY {
            return Ok(1);
        }
        dist[h * nl + li] = 1;
        queue.push_back((h, li));
    }
    while let Some((g, last)) = queue.pop_front() {
        let d = dist[g * nl + last];
        if d >= depth_cap {
            return Err(GroupError::DepthCapReached {
                lower_bound_minus_one: depth_cap,
            });
        }
        for li in 0..nl {
            if li == inverse_slot(last) {
                continue;
            }
            let h = table[g][li];
            if h == FiniteGroup::IDENTITY {
                return Ok(d + 1);
            }
            if dist[h * nl + li] == usize::MAX {
                dist[h * nl + li] = d + 1;
                queue.push_back((h, li));
            }
        }
    }
    unreachable!("every element of a finite group has finite order")
}

fn abelian_radius(group: &FiniteGroup, depth_cap: usize) -> Result<usize, GroupError> {
    let gens = group.spec().generators();
    for a in gens {
        for b in gens {
            if a.then(b) != b.then(a) {
                return Err(GroupError::NonCommutingImages);
            }
        }
    }
    let rank = gens.len();
    if rank == 0 {
        return Err(GroupError::DepthCapReached {
            lower_bound_minus_one: depth_cap,
        });
    }
    // powers[i][k] = g_i^k, k < order(g_i)
    let powers: Vec<Vec<Permutation>> = gens
        .iter()
        .map(|g| {
            let mut pw = vec![Permutation::identity(g.degree())];
            let mut cur = g.clone();
            while !cur.is_identity() {
                pw.push(cur.clone());
                cur = cur.then(g);
            }
            pw
        })
        .collect();
    let image = |v: &[i64]| -> bool {
        let mut p = Permutation::identity(group.spec().degree());
        for (i, &e) in v.iter().enumerate() {
            let ord = powers[i].len() as i64;
            p = p.then(&powers[i][e.rem_euclid(ord) as usize]);
        }
        p.is_identity()
    };
    for norm in 1..=depth_cap {
        let mut v = vec![0i64; rank];
        if search_norm(&mut v, 0, norm as i64, &image) {
            return Ok(norm);
        }
    }
    Err(GroupError::DepthCapReached {
        lower_bound_minus_one: depth_cap,
    })
}

fn search_norm(v: &mut [i64], pos: usize, remaining: i64, hit: &impl Fn(&[i64]) -> bool) -> bool {
    if pos == v.len() - 1 {
        for s in [remaining, -remaining] {
            v[pos] = s;
            if hit(v) {
                return true;
            }
            if remaining == 0 {
                break;
            }
        }
        v[pos] = 0;
        return false;
    }
    for k in 0..=remaining {
        for s in [k, -k] {
            v[pos] = s;
            if search_norm(v, pos + 1, remaining - k, hit) {
                return true;
            }
            if k == 0 {
                break;
            }
        }
    }
    v[pos] = 0;
    false
}
