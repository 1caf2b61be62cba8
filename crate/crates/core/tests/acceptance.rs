//! Acceptance suite. Each test prints one `PASS`/`FAIL` line for its
//! criterion and then asserts it.

mod common;

use std::time::{Duration, Instant};

use coarse_lab::embed::{
    certificate_from_spectral_gap, cut_cone_lp, extension_compose, max_separation_sdp,
    poincare_value, CertificateMeasure, Extension, KernelFamily,
};
use coarse_lab::groups::{
    box_space_build, FiltrationSpec, FiniteGroup, ParentGroup, Permutation, QuotientGroupSpec,
};
use coarse_lab::metric::{
    coarse_disjoint_union, BlockMeta, ControlFunction, ControlPair,
    FiniteMetricSpace,
};
use coarse_lab::scan::{
    ce_at_infinity_profile, combine_scales, combine_violations, generalized_expander_search,
    obstruction_check, ExclusionRule, ScaleMap,
};
use coarse_lab::spectral::{cubic_graph, lambda1, FiniteGraph};
use coarse_lab::warp::{circle_net, cone_net, rotation_action, warp_metric, NetSpec};
use num_rational::Ratio;
use rand::Rng;

fn report(id: u32, name: &str, outcome: Result<String, String>) {
    match outcome {
        Ok(detail) => println!("criterion {id:>2} [{name}]: PASS ({detail})"),
        Err(detail) => {
            println!("criterion {id:>2} [{name}]: FAIL ({detail})");
            panic!("criterion {id} failed: {detail}");
        }
    }
}

fn within(budget: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    if took <= budget {
        Ok(took)
    } else {
        Err(format!("took {took:?}, budget {budget:?}"))
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c4_diagonals_measure() -> CertificateMeasure {
    CertificateMeasure::from_unordered(&[((0, 2), 0.5), ((1, 3), 0.5)], 2.0, 2.0, 2)
}

#[test]
fn criterion_01_sdp_exactness() {
    let outcome = (|| {
        let start = Instant::now();
        let c4 = common::cycle_metric(4);
        let res = max_separation_sdp(&c4, 2.0).map_err(|e| e.to_string())?;
        let pv = poincare_value(&c4, &res.certificate).map_err(|e| e.to_string())?;
        let took = within(Duration::from_secs(1), start)?;
        let sqrt2 = 2f64.sqrt();
        check((res.s_star - sqrt2).abs() <= 1e-6, || format!("s_star = {}", res.s_star))?;
        check((pv - 2.0).abs() <= 1e-6, || format!("poincare_value = {pv}"))?;
        // the square embedding attains √2 on both diagonals, and the
        // quadrilateral inequality bounds the diagonal sum by the sides
        let square = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]
            .map(|p| p.map(|v: f64| v / sqrt2).to_vec());
        let oracle = c4_diagonals_measure();
        check((oracle.evaluate(&square) - 2.0).abs() < 1e-12, || "square embedding".into())?;
        Ok(format!("s_star = {:.9}, pv = {pv:.9}, {took:?}", res.s_star))
    })();
    report(1, "SDP exactness on C4", outcome);
}

#[test]
fn criterion_02_duality_suite() {
    let outcome = (|| {
        let start = Instant::now();
        let mut rng = common::rng(0x5eed_0002);
        let mut worst_gap: f64 = 0.0;
        for instance in 0..100 {
            let n = rng.gen_range(2..=12);
            let space = common::random_integer_metric(&mut rng, n, 8);
            let r = common::random_scale(&mut rng, &space);
            let res = max_separation_sdp(&space, r)
                .map_err(|e| format!("instance {instance}: {e}"))?;
            let cert = &res.certificate;
            let pv = poincare_value(&space, cert).map_err(|e| format!("instance {instance}: {e}"))?;
            let s2 = res.s_star * res.s_star;
            let gap = (pv - s2).abs() / s2.max(1.0);
            worst_gap = worst_gap.max(gap);
            check(gap <= 1e-6, || {
                format!("instance {instance}: pv {pv} vs s_star² {s2} (n={n}, R={r})")
            })?;
            let mut total = 0.0;
            for &(i, j, w) in &cert.pairs {
                total += w;
                check(space.d(i, j) > r - 1e-12, || {
                    format!("instance {instance}: mass on near pair ({i},{j})")
                })?;
                let mirror: f64 = cert
                    .pairs
                    .iter()
                    .filter(|&&(a, b, _)| a == j && b == i)
                    .map(|p| p.2)
                    .sum();
                check((mirror - w).abs() <= 1e-12, || {
                    format!("instance {instance}: asymmetric weight on ({i},{j})")
                })?;
            }
            check((total - 1.0).abs() <= 1e-9, || format!("instance {instance}: mass {total}"))?;
        }
        let took = within(Duration::from_secs(60), start)?;
        Ok(format!("100 instances, worst relative gap {worst_gap:.2e}, {took:?}"))
    })();
    report(2, "duality suite", outcome);
}

#[test]
fn criterion_03_brute_force_equivalence() {
    let outcome = (|| {
        let mut rng = common::rng(0x5eed_0003);
        let mut worst: f64 = 0.0;
        for instance in 0..20 {
            let n = if instance < 10 { 4 } else { 5 };
            let space = common::random_integer_metric(&mut rng, n, 8);
            let r = common::random_scale(&mut rng, &space);
            let sdp = max_separation_sdp(&space, r).map_err(|e| e.to_string())?.s_star;
            let brute = common::brute_force_separation(&space, r, instance);
            worst = worst.max((sdp - brute).abs());
            check((sdp - brute).abs() <= 1e-3, || {
                format!("instance {instance}: sdp {sdp} vs search {brute}")
            })?;
        }
        Ok(format!("20 instances, worst difference {worst:.2e}"))
    })();
    report(3, "brute-force equivalence", outcome);
}

#[test]
fn criterion_04_spectral_closed_forms() {
    let outcome = (|| {
        let start = Instant::now();
        for n in 3..=64 {
            let expected = 2.0 - 2.0 * (2.0 * std::f64::consts::PI / n as f64).cos();
            let got = lambda1(&FiniteGraph::cycle(n)).map_err(|e| e.to_string())?;
            check((got - expected).abs() <= 1e-9, || format!("C_{n}: {got} vs {expected}"))?;
        }
        for n in 2..=32 {
            let got = lambda1(&FiniteGraph::complete(n)).map_err(|e| e.to_string())?;
            check((got - n as f64).abs() <= 1e-9, || format!("K_{n}: {got}"))?;
        }
        let took = within(Duration::from_secs(5), start)?;
        Ok(format!("C_3..C_64 and K_2..K_32, {took:?}"))
    })();
    report(4, "spectral closed forms", outcome);
}

#[test]
fn criterion_05_spectral_certificate() {
    let outcome = (|| {
        let mut details = Vec::new();
        for n in [8usize, 16, 32] {
            let g = cubic_graph(n);
            let cert = certificate_from_spectral_gap(&g).map_err(|e| e.to_string())?;
            let metric = g.metric().map_err(|e| e.to_string())?;
            let pv = poincare_value(&metric, &cert.measure).map_err(|e| e.to_string())?;
            let bound = 2.0 * 3.0 / cert.lambda1;
            check(pv <= bound + 1e-6, || format!("n={n}: pv {pv} > 2k0/λ1 = {bound}"))?;
            let r = (n as f64 / 2.0).ln() / 3f64.ln();
            let far = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| metric.d(i, j) >= r)
                .count();
            let mass = far as f64 / (n * n) as f64;
            check(mass >= 0.5, || format!("n={n}: far mass {mass}"))?;
            details.push(format!("n={n}: pv {pv:.3} ≤ {bound:.3}, mass {mass:.3}"));
        }
        Ok(details.join("; "))
    })();
    report(5, "spectral-gap certificate", outcome);
}

#[test]
fn criterion_06_obstruction_shape() {
    let outcome = (|| {
        let graphs: Vec<FiniteGraph> = [8, 16, 32].map(cubic_graph).to_vec();
        let blocks: Vec<FiniteMetricSpace> = graphs.iter().map(|g| g.metric().unwrap()).collect();
        let meta = graphs
            .iter()
            .map(|g| BlockMeta {
                injectivity_radius: None,
                graph: Some(g.clone()),
            })
            .collect();
        let space = coarse_disjoint_union(blocks.clone())
            .and_then(|s| s.with_meta(meta))
            .map_err(|e| e.to_string())?;
        let c_max = graphs
            .iter()
            .map(|g| 6.0 / lambda1(g).unwrap())
            .fold(0.0, f64::max);
        let r_small = blocks.iter().map(FiniteMetricSpace::diameter).fold(0.0, f64::max);
        let schedule: Vec<(f64, f64)> = [1.0, 2.0, 3.0].iter().map(|&big| (r_small + big - 1.0, big)).collect();
        let search =
            generalized_expander_search(&space, &schedule, c_max).map_err(|e| e.to_string())?;
        check(search.complete, || "schedule has unfilled slots".into())?;
        let c = search.c_star.ok_or("no constant")?;
        check(c <= c_max, || format!("c* {c} above c_max {c_max}"))?;
        for step in 0..schedule.len() {
            let deepest = search
                .slots
                .iter()
                .find(|s| s.step == step && s.excluded == space.num_blocks() - 1)
                .ok_or("missing deepest slot")?;
            check(deepest.found.is_some(), || format!("step {step} not certified deep"))?;
        }
        // claims `ρ−(t) = β·t ≤ ρ+(t) = t`; each one must be refuted exactly
        // on the slots where `(β·R_m)²` exceeds the certified constant
        let mut fired = 0;
        for beta in [1.0, 0.9, 0.75] {
            let claim = ControlPair::new(ControlFunction::linear(beta), ControlFunction::linear(1.0))
                .map_err(|e| e.to_string())?;
            let hits = obstruction_check(&space, &search, &claim);
            for slot in &search.slots {
                let found = slot.found.as_ref().unwrap();
                let expect = (beta * slot.r_big).powi(2) > found.certificate.c * (1.0 + 1e-9);
                let hit = hits
                    .iter()
                    .any(|h| h.step == slot.step && h.excluded == slot.excluded);
                check(hit == expect, || {
                    format!("β={beta}, step {}, K={}: fired={hit}", slot.step, slot.excluded)
                })?;
            }
            fired += hits.len();
        }
        let iso = ControlPair::new(ControlFunction::linear(1.0), ControlFunction::linear(1.0))
            .map_err(|e| e.to_string())?;
        let iso_hits = obstruction_check(&space, &search, &iso);
        let beyond_unit = search.slots.iter().filter(|s| s.r_big >= 2.0).count();
        check(iso_hits.iter().filter(|h| h.r >= 2.0).count() == beyond_unit, || {
            format!("isometric claim survives some slot with R ≥ 2: {iso_hits:?}")
        })?;
        Ok(format!(
            "{} slots, c* = {c:.4} ≤ c_max = {c_max:.4}, R_m = 1,2,3, {fired} contradictions",
            search.slots.len()
        ))
    })();
    report(6, "obstruction shape", outcome);
}

#[test]
fn criterion_07_box_space_transfer() {
    let outcome = (|| {
        let levels = [4usize, 16, 64];
        let spec = FiltrationSpec {
            parent: ParentGroup::FreeAbelian { rank: 1 },
            stages: levels.iter().map(|&m| QuotientGroupSpec::cyclic(m)).collect(),
        };
        let (space, _) = box_space_build(&spec, 1024).map_err(|e| e.to_string())?;
        let scales = [2.0, 4.0, 8.0];
        let profile = ce_at_infinity_profile(&space, &scales, &ExclusionRule::InjectivityRadius)
            .map_err(|e| e.to_string())?;
        for entry in &profile.per_scale {
            let rho = entry.rho_minus.ok_or_else(|| format!("no windows at R={}", entry.r))?;
            check((rho - entry.r).abs() <= 1e-6, || format!("rho_minus({}) = {rho}", entry.r))?;
        }
        let parent = ParentGroup::FreeAbelian { rank: 1 };
        let mut lifts = 0;
        for &r in &scales {
            let excluded = ExclusionRule::InjectivityRadius
                .excluded(&space, r)
                .map_err(|e| e.to_string())?;
            for (k, &m) in levels.iter().enumerate().skip(excluded) {
                let group = FiniteGroup::enumerate(&QuotientGroupSpec::cyclic(m), 1024)
                    .map_err(|e| e.to_string())?;
                for center in 0..group.order() {
                    check(parent.lift_is_isometric(&group, center, (r / 2.0) as usize), || {
                        format!("block {k}, center {center}, R={r}")
                    })?;
                    lifts += 1;
                }
            }
        }
        Ok(format!("rho_minus(R) = R for R in 2,4,8; {lifts} lifted balls isometric"))
    })();
    report(7, "box-space transfer", outcome);
}

#[test]
fn criterion_08_scale_combiner() {
    let outcome = (|| {
        let mut windows: Vec<FiniteMetricSpace> = vec![
            common::line_metric(9),
            common::cycle_metric(8),
            common::cycle_metric(5),
        ];
        let mut rng = common::rng(0x5eed_0008);
        for _ in 0..5 {
            let n = rng.gen_range(3..=8);
            windows.push(common::random_integer_metric(&mut rng, n, 6));
        }
        let big_n = 4usize;
        let rho = |d: f64| big_n as f64 * d;
        let mut pairs = 0;
        for (w, space) in windows.iter().enumerate() {
            let n = space.len();
            let diam = space.diameter();
            let line = w == 0;
            let maps: Vec<ScaleMap> = (1..=big_n)
                .map(|k| {
                    let coords = (0..n)
                        .map(|x| {
                            if line {
                                vec![x as f64]
                            } else {
                                let mut v = vec![0.0; n];
                                v[x] = k as f64 / 2f64.sqrt();
                                v
                            }
                        })
                        .collect();
                    ScaleMap {
                        r: if line { k as f64 } else { k as f64 * diam / big_n as f64 },
                        coords,
                    }
                })
                .collect();
            let rs: Vec<f64> = maps.iter().map(|m| m.r).filter(|&r| r >= diam).collect();
            let mut rs = rs;
            rs.push(diam);
            rs.dedup();
            for r in rs {
                let combined =
                    combine_scales(space, &maps, &rho, r).map_err(|e| format!("window {w}: {e}"))?;
                let bad = combine_violations(space, &combined, &rho);
                check(bad.is_empty(), || format!("window {w}, r={r}: violations {bad:?}"))?;
                pairs += n * (n - 1) / 2;
            }
        }
        Ok(format!("{} windows, {pairs} pair checks, zero violations", windows.len()))
    })();
    report(8, "scale combiner", outcome);
}

/// `r^k s^e` in the dihedral group of order 8, with `s r s = r⁻¹`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct D8(u8, u8);

impl D8 {
    const E: D8 = D8(0, 0);

    fn mul(self, o: D8) -> D8 {
        let k = if self.1 == 0 { self.0 + o.0 } else { self.0 + 4 - o.0 };
        D8(k % 4, (self.1 + o.1) % 2)
    }

    fn inv(self) -> D8 {
        if self.1 == 0 {
            D8((4 - self.0) % 4, 0)
        } else {
            self
        }
    }

    fn from_parent_word(word: &[i64]) -> D8 {
        word.iter().fold(D8::E, |acc, &l| {
            acc.mul(match l {
                1 => D8(1, 0),
                -1 => D8(3, 0),
                2 | -2 => D8(0, 1),
                _ => unreachable!(),
            })
        })
    }
}

#[test]
fn criterion_09_extension_composition() {
    let outcome = (|| {
        let spec = QuotientGroupSpec::new(
            4,
            vec![
                Permutation::new(vec![1, 2, 3, 0]).unwrap(),
                Permutation::new(vec![0, 3, 2, 1]).unwrap(),
            ],
        )
        .unwrap();
        let images = vec![Permutation::identity(2), Permutation::new(vec![1, 0]).unwrap()];
        let ext = Extension::new(&spec, 2, images, 64).map_err(|e| e.to_string())?;
        let g = ext.group();
        let elems: Vec<D8> = (0..g.order()).map(|i| D8::from_parent_word(&g.parent_word(i))).collect();
        let index = |x: D8| elems.iter().position(|&y| y == x).unwrap();
        check(g.order() == 8, || "order".into())?;
        for a in 0..8 {
            for b in 0..8 {
                check(elems[g.mul(a, b)] == elems[a].mul(elems[b]), || "table mismatch".into())?;
            }
        }
        let ext = ext
            .with_section(vec![index(D8::E), index(D8(0, 1))])
            .map_err(|e| e.to_string())?;
        let sigma = [D8::E, D8(0, 1)];

        // hand-built unit families: ζ on the kernel (rotations), λ on Z/2
        let mut rng = common::rng(0x5eed_0009);
        let zdim = 8;
        let kernel: Vec<D8> = (0..4).map(|k| D8(k, 0)).collect();
        let zeta_vectors: Vec<Vec<f64>> = kernel
            .iter()
            .map(|_| {
                let v: Vec<f64> = (0..zdim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                v.into_iter().map(|x| x / norm).collect()
            })
            .collect();
        let (a, b) = (0.3f64, 1.1f64);
        let lambda_vectors = vec![vec![a.cos(), a.sin()], vec![b.sin(), b.cos()]];
        let zeta = KernelFamily {
            base: kernel.iter().map(|&k| index(k)).collect(),
            vectors: zeta_vectors.clone(),
            support_radius: 2.0,
        };
        let quotient_index = |e: u8| if e == 0 { 0 } else { 1 };
        let lambda = KernelFamily {
            base: vec![0, 1],
            vectors: lambda_vectors.clone(),
            support_radius: 1.0,
        };
        check(ext.quotient().order() == 2 && ext.project(index(D8(0, 1))) == 1, || {
            "quotient layout".into()
        })?;
        let xi = extension_compose(&ext, &zeta, &lambda).map_err(|e| e.to_string())?;

        // 16-dimensional oracle: ξ_g = Σ_p λ_{π(g)}(p) e_p ⊗ ζ_{η(g,p)}
        let oracle: Vec<Vec<f64>> = elems
            .iter()
            .map(|&x| {
                let pi = quotient_index(x.1);
                let mut v = vec![0.0; 2 * zdim];
                for p in 0..2u8 {
                    let shifted = (x.1 + p) % 2;
                    let eta = sigma[p as usize].inv().mul(x).mul(sigma[shifted as usize]);
                    assert_eq!(eta.1, 0);
                    let z = &zeta_vectors[eta.0 as usize];
                    for k in 0..zdim {
                        v[p as usize * zdim + k] = lambda_vectors[pi][p as usize] * z[k];
                    }
                }
                v
            })
            .collect();
        let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(x, y)| x * y).sum::<f64>();
        let mut worst: f64 = 0.0;
        for i in 0..8 {
            let norm = xi.inner(i, i).sqrt();
            check((norm - 1.0).abs() <= 1e-12, || format!("‖ξ_{i}‖ = {norm}"))?;
            for j in 0..8 {
                let diff = (xi.inner(i, j) - dot(&oracle[i], &oracle[j])).abs();
                worst = worst.max(diff);
                check(diff <= 1e-12, || format!("<ξ_{i}, ξ_{j}> differs by {diff}"))?;
            }
        }
        Ok(format!("8 unit vectors, worst inner-product difference {worst:.1e}"))
    })();
    report(9, "extension composition", outcome);
}

#[test]
fn criterion_10_cut_cone_gap() {
    let outcome = (|| {
        let c4 = common::cycle_metric(4);
        let l1 = cut_cone_lp(&c4, 2.0).map_err(|e| e.to_string())?;
        let l2 = max_separation_sdp(&c4, 2.0).map_err(|e| e.to_string())?;
        check((l1.s_star - 2.0).abs() <= 1e-9, || format!("L1 s_star = {}", l1.s_star))?;
        check((l2.s_star - 2f64.sqrt()).abs() <= 1e-6, || format!("L2 s_star = {}", l2.s_star))?;
        Ok(format!("L1 {:.12} vs Hilbert {:.9}", l1.s_star, l2.s_star))
    })();
    report(10, "cut-cone LP gap", outcome);
}

#[test]
fn criterion_11_warped_cone() {
    let outcome = (|| {
        let spec: NetSpec =
            serde_json::from_str(r#"{"base":"circle","size":8,"alpha":"1/4","levels":[4]}"#)
                .map_err(|e| e.to_string())?;
        let net = spec.build().map_err(|e| e.to_string())?;
        let warped = warp_metric(&net).map_err(|e| e.to_string())?;
        let (a, b) = (net.index(0, 0), net.index(2, 0));
        check(net.intrinsic(a, b) == 2.0, || "intrinsic distance".into())?;
        check(warped.d(a, b) == 1.0, || format!("d_Γ = {}", warped.d(a, b)))?;
        let exact = rotation_action(Ratio::new(1, 4), 8).map_err(|e| e.to_string())?;
        check(exact.is_exact(), || "rotation snapped".into())?;

        let plain = cone_net(circle_net(8).unwrap(), 0.5, vec![1.0, 2.5, 4.0])
            .map_err(|e| e.to_string())?;
        let closed = warp_metric(&plain).map_err(|e| e.to_string())?;
        let mut worst: f64 = 0.0;
        for x in 0..plain.len() {
            for y in 0..plain.len() {
                let (px, lx) = plain.point(x);
                let (py, ly) = plain.point(y);
                let levels: [f64; 3] = [1.0, 2.5, 4.0];
                let (tx, ty) = (levels[lx], levels[ly]);
                let arc = {
                    let k = px.abs_diff(py);
                    k.min(8 - k) as f64 / 8.0
                };
                let formula = (tx - ty).abs() + tx.min(ty) * arc / 0.5;
                worst = worst.max((closed.d(x, y) - formula).abs());
            }
        }
        check(worst <= 1e-12, || format!("intrinsic formula off by {worst}"))?;
        Ok(format!("d_Γ = 1 exactly, intrinsic reproduced (max error {worst:.1e})"))
    })();
    report(11, "warped cone", outcome);
}
