mod common;

use std::sync::Arc;

use common::*;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use toric_okounkov::bary::{self, BaryProfile};
use toric_okounkov::exact::{from_int, int, rat, rint, Int, Rat};
use toric_okounkov::fan::{quotient_relation_holds, star_subdivide, Fan};
use toric_okounkov::flag::{build_flag_chain, FlagChain, FlagFrame};
use toric_okounkov::lattice::{cone_coordinates, lattice_index, quotient_lattice, smith_diagonal, LatticeVector, RationalCone};
use toric_okounkov::linalg::{det, mat_vec, Matrix};
use toric_okounkov::okounkov::*;
use toric_okounkov::polytope::{from_vertices, vertices_from_halfspaces};
use toric_okounkov::threshold::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn int_vec(n: usize, b: i64) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-b..=b, n)
}

/// Random unimodular matrix as a product of elementary operations.
fn unimodular(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..3 * n {
        let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
        if i == j {
            u.swap(0, i);
            continue;
        }
        let k = r.gen_range(-2..=2);
        for c in 0..n {
            u[i][c] += k * u[j][c];
        }
    }
    u
}

fn apply(u: &[Vec<i64>], v: &LatticeVector) -> LatticeVector {
    let c: Vec<Int> = u.iter().map(|row| row.iter().zip(v.coords()).map(|(a, x)| x * a).sum()).collect();
    LatticeVector::new(c)
}

fn transformed_fan(fan: &Fan, u: &[Vec<i64>]) -> Fan {
    Fan::new(fan.rank, fan.rays.iter().map(|r| apply(u, r)).collect(), fan.cones.clone()).unwrap()
}

proptest! {
    #![proptest_config(config(96))]

    #[test]
    fn index_is_abs_det(rows in proptest::collection::vec(int_vec(3, 4), 3)) {
        let vs: Vec<LatticeVector> = rows.iter().map(|r| LatticeVector::from_i64(r)).collect();
        let m: Matrix = vs.iter().map(|v| v.to_rats()).collect();
        let d = det(&m);
        prop_assume!(!d.is_zero());
        prop_assert_eq!(from_int(&lattice_index(&vs).unwrap()), d.abs());
    }

    #[test]
    fn quotient_projection_kills_v(v in int_vec(3, 5), w in int_vec(3, 6), t in -5i64..=5) {
        let v = LatticeVector::from_i64(&v);
        prop_assume!(!v.is_zero() && v.is_primitive());
        let q = quotient_lattice(3, &v).unwrap();
        let w = LatticeVector::from_i64(&w);
        let shifted = w.add(&v.scaled(&int(t)));
        prop_assert_eq!(q.project(&shifted), q.project(&w));
        prop_assert_eq!(q.project(&q.lift(&q.project(&w))), q.project(&w));
    }

    #[test]
    fn cone_coordinates_reproduce(rows in proptest::collection::vec(int_vec(3, 3), 3), x in proptest::collection::vec(0i64..=4, 3)) {
        let gens: Vec<LatticeVector> = rows.iter().map(|r| LatticeVector::from_i64(r)).collect();
        prop_assume!(gens.iter().all(|g| !g.is_zero() && g.is_primitive()));
        prop_assume!(!det(&gens.iter().map(|v| v.to_rats()).collect()).is_zero());
        let cone = RationalCone::new(gens.clone(), 3).unwrap();
        let v = gens.iter().zip(&x).fold(LatticeVector::zero(3), |acc, (g, &k)| acc.add(&g.scaled(&int(k))));
        let lam = cone_coordinates(&v, &cone).unwrap();
        let back: Vec<Rat> = (0..3).map(|i| gens.iter().zip(&lam).map(|(g, l)| from_int(&g.coords()[i]) * l).sum()).collect();
        prop_assert_eq!(back, v.to_rats());
    }

    #[test]
    fn smith_index_invariant(rows in proptest::collection::vec(int_vec(4, 4), 2), seed in any::<u64>()) {
        let vs: Vec<LatticeVector> = rows.iter().map(|r| LatticeVector::from_i64(r)).collect();
        let Ok(idx) = lattice_index(&vs) else { return Ok(()) };
        let mut r = rng(seed);
        let u = unimodular(&mut r, 4);
        // column operations on the row matrix: v ↦ Uᵀ-action on coordinates
        let moved: Vec<LatticeVector> = vs.iter().map(|v| apply(&u, v)).collect();
        prop_assert_eq!(lattice_index(&moved).unwrap(), idx.clone());
        let raw: Vec<Vec<Int>> = moved.iter().map(|v| v.coords().to_vec()).collect();
        prop_assert_eq!(smith_diagonal(&raw).iter().product::<Int>(), idx);
    }
}

fn check_flag_invariants(flag: &FlagChain) -> Result<(), TestCaseError> {
    let n = flag.rank;
    for j in 0..n {
        prop_assert!(flag.c[j][j].is_positive());
        prop_assert!(flag.m[0][j].is_one());
        for k in j..n {
            prop_assert!(!flag.c[j][k].is_negative());
            let prod: Int = (0..=j).map(|i| flag.m[i][k].clone()).product();
            prop_assert_eq!(&flag.c_prime[j][k], &(&flag.c[j][k] / from_int(&prod)));
        }
    }
    for j in 0..n {
        let lhs = from_int(&flag.fans[j].cone_multiplicity(flag.tau[j])) * (j..n).map(|k| flag.c[k][k].clone()).product::<Rat>();
        let rhs: Int = (j + 1..n).flat_map(|i| (i..n).map(move |k| (i, k))).map(|(i, k)| flag.m[i][k].clone()).product();
        prop_assert_eq!(lhs, from_int(&rhs));
    }
    let diag: Rat = (0..n).map(|i| flag.c_prime[i][i].clone()).product();
    prop_assert_eq!(diag * from_int(&flag.tau0_multiplicity()), Rat::one());
    for (j, q) in flag.quotients.iter().enumerate() {
        for k in 0..q.fan.rays.len() {
            prop_assert!(quotient_relation_holds(q, &flag.subdivisions[j].fan, k));
        }
    }
    if flag.admissible {
        let l = flag.l_values.as_ref().unwrap();
        for j in 0..n {
            for k in j..n {
                prop_assert_eq!(&flag.c[j][k], &rint(i64::from(j == k)));
            }
            let prod: Int = (0..=j).map(|i| flag.m[i][j].clone()).product();
            prop_assert_eq!(from_int(&prod), from_int(&l[j + 1]) / from_int(&l[j]));
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn flag_chain_invariants(seed in any::<u64>()) {
        let mut r = rng(seed);
        let corpus = volume_corpus();
        let (_, fan) = corpus.choose(&mut r).unwrap();
        let flag = random_flag(&mut r, fan, 3);
        check_flag_invariants(&flag)?;
    }

    #[test]
    fn star_subdivision_preserves_support(seed in any::<u64>()) {
        let mut r = rng(seed);
        let corpus = volume_corpus();
        let (_, fan) = corpus.choose(&mut r).unwrap();
        let v = random_primitive(&mut r, fan.rank, 3);
        let sub = star_subdivide(fan, &v).unwrap();
        prop_assert!(sub.fan.complete);
        for _ in 0..20 {
            let p: Vec<Rat> = (0..fan.rank).map(|_| rint(r.gen_range(-4..=4))).collect();
            prop_assert_eq!(fan.in_support(&p), sub.fan.in_support(&p));
        }
        prop_assert_eq!(sub.fan.ray_index(&v), Some(sub.ray));
    }

    #[test]
    fn flag_data_independent_of_basis(seed in any::<u64>()) {
        let mut r = rng(seed);
        let corpus = volume_corpus();
        let (_, fan) = corpus.choose(&mut r).unwrap();
        let flag = random_flag(&mut r, fan, 3);
        let d = random_big_divisor(&mut r, fan);
        let u = unimodular(&mut r, fan.rank);
        let moved = Arc::new(transformed_fan(fan, &u));
        // divisor coefficients follow the rays, which Fan::new may reorder
        let coeffs: Vec<Rat> = moved.rays.iter().map(|ray| {
            let src = fan.rays.iter().position(|x| &apply(&u, x) == ray).unwrap();
            d.coefficients[src].clone()
        }).collect();
        let d2 = ToricDivisor::new(moved.clone(), coeffs).unwrap();
        let vs: Vec<LatticeVector> = (0..flag.rank).map(|k| apply(&u, &flag.lift_to_ambient(k, &flag.vectors[k]))).collect();
        let flag2 = build_flag_chain(&moved, &vs, FlagFrame::Ambient).unwrap();
        prop_assert_eq!(&flag.m, &flag2.m);
        prop_assert_eq!(&flag.c, &flag2.c);
        prop_assert_eq!(&flag.c_prime, &flag2.c_prime);
        prop_assert_eq!(&flag.l_values, &flag2.l_values);
        prop_assert_eq!(flag_s_invariants(&d, &flag).unwrap(), flag_s_invariants(&d2, &flag2).unwrap());
        prop_assert_eq!(d.volume().unwrap(), d2.volume().unwrap());
    }
}

fn random_body(r: &mut rand_chacha::ChaCha8Rng, dim: usize) -> toric_okounkov::polytope::Polytope {
    loop {
        let count = r.gen_range(dim + 1..=dim + 4);
        let pts: Vec<Vec<Rat>> = (0..count).map(|_| (0..dim).map(|_| random_rat(r, -2, 2, 2)).collect()).collect();
        if let Ok(p) = from_vertices(dim, &pts) {
            if p.full_dim {
                return p;
            }
        }
    }
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn double_description_round_trip(seed in any::<u64>(), dim in 2usize..=3) {
        let mut r = rng(seed);
        let p = random_body(&mut r, dim);
        let h = p.canonical_halfspaces();
        let q = vertices_from_halfspaces(dim, h.clone()).unwrap();
        prop_assert_eq!(&q.vertices, &p.vertices);
        prop_assert_eq!(q.canonical_halfspaces(), h);
    }

    #[test]
    fn affine_volume_scales_by_det(seed in any::<u64>(), dim in 2usize..=3) {
        let mut r = rng(seed);
        let p = random_body(&mut r, dim);
        let a: Matrix = (0..dim).map(|_| (0..dim).map(|_| random_rat(&mut r, -2, 2, 2)).collect()).collect();
        let b: Vec<Rat> = (0..dim).map(|_| random_rat(&mut r, -3, 3, 3)).collect();
        let d = det(&a);
        prop_assume!(!d.is_zero());
        let img = p.affine_image(&a, &b).unwrap();
        prop_assert_eq!(img.volume(), d.abs() * p.volume());
        let bc = p.mass().barycenter.unwrap();
        let moved: Vec<Rat> = mat_vec(&a, &bc).iter().zip(&b).map(|(x, y)| x + y).collect();
        prop_assert_eq!(img.mass().barycenter.unwrap(), moved);
    }

    #[test]
    fn slice_profile_matches_mass(seed in any::<u64>(), dim in 2usize..=3) {
        let mut r = rng(seed);
        let p = random_body(&mut r, dim);
        let m = p.mass();
        let bc = m.barycenter.clone().unwrap();
        prop_assert!(p.strictly_contains(&bc));
        for axis in 0..dim {
            let sp = p.slice_profile(axis).unwrap();
            prop_assert_eq!(&sp.volume, &m.volume);
            prop_assert_eq!(sp.g.integral(), m.volume.clone());
            prop_assert_eq!(&sp.barycenter, &bc[axis]);
        }
    }

    #[test]
    fn slice_root_is_concave(seed in any::<u64>(), dim in 2usize..=3) {
        let mut r = rng(seed);
        let p = random_body(&mut r, dim);
        let sp = p.slice_profile(0).unwrap();
        let span = &sp.t1 - &sp.t0;
        let mut xs: Vec<Rat> = (0..3).map(|_| &sp.t0 + &span * rat(r.gen_range(0..=16), 16)).collect();
        xs.sort();
        prop_assume!(xs[0] < xs[2]);
        let lam = (&xs[2] - &xs[1]) / (&xs[2] - &xs[0]);
        let mu = Rat::one() - &lam;
        let (g0, g1, g2) = (sp.g.eval(&xs[0]), sp.g.eval(&xs[1]), sp.g.eval(&xs[2]));
        if dim == 2 {
            prop_assert!(g1 >= &lam * g0 + &mu * g2);
        } else {
            // √g₁ ≥ λ√g₀ + μ√g₂ squared out
            let lhs = g1 - &lam * &lam * &g0 - &mu * &mu * &g2;
            let cross = rint(4) * &lam * &lam * &mu * &mu * g0 * g2;
            prop_assert!(!lhs.is_negative() && &lhs * &lhs >= cross);
        }
    }

    #[test]
    fn envelope_dominates_and_normalizes(seed in any::<u64>(), dim in 2usize..=3) {
        let mut r = rng(seed);
        let p = random_body(&mut r, dim);
        let sp = p.slice_profile(0).unwrap();
        let e = &sp.t0 + (&sp.t1 - &sp.t0) * rat(r.gen_range(1..8), 8);
        let prof = BaryProfile::from_slice_profile(&sp, dim, e.clone(), r.gen_bool(0.5)).unwrap();
        for i in 0..=8 {
            let x = &e + (&sp.t1 - &e) * rat(i, 8);
            prop_assert!(prof.h0(&x) >= sp.g.eval(&x));
        }
        let s0 = bary::lower_bound_s0(&prof, 96).unwrap();
        prop_assert!(s0.bound.lo <= sp.barycenter);
        if s0.point.is_exact() {
            let s = s0.point.lo.clone();
            let mass = sp.g.moment(&sp.t0, &e, 0) + h0_mass(&prof, &e, &s);
            prop_assert_eq!(mass, sp.volume.clone());
        }
    }
}

/// `∫_e^s h₀` by exact polynomial integration of `g(e)·φ^{n−1}`.
fn h0_mass(p: &BaryProfile, e: &Rat, s: &Rat) -> Rat {
    use toric_okounkov::poly::Polynomial;
    let ge = p.g.eval(e);
    let n = p.n as i64;
    let slope = if p.v.is_zero() { Rat::zero() } else { &p.v / (rint(n - 1) * &ge) };
    let phi = Polynomial::new(vec![Rat::one() - &slope * e, slope]);
    phi.pow(p.n - 1).scale(&ge).integrate(e, s)
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn okounkov_volume_and_barycenter(seed in any::<u64>()) {
        let mut r = rng(seed);
        let corpus = volume_corpus();
        let (_, fan) = corpus.choose(&mut r).unwrap();
        let d = random_big_divisor(&mut r, fan);
        let flag = random_flag(&mut r, fan, 3);
        let body = okounkov_body(&d, &flag).unwrap();
        prop_assert_eq!(body.body.volume(), d.volume().unwrap());
        prop_assert_eq!(body.body.mass().barycenter.unwrap(), flag_s_invariants(&d, &flag).unwrap());
    }

    #[test]
    fn s_t_scaling_and_bounds(seed in any::<u64>()) {
        let mut r = rng(seed);
        let corpus = volume_corpus();
        let (_, fan) = corpus.choose(&mut r).unwrap();
        let d = random_big_divisor(&mut r, fan);
        let v = random_primitive(&mut r, fan.rank, 3);
        let c = random_rat(&mut r, 1, 5, 3);
        let (s, t) = s_t_invariants(&d, &v).unwrap();
        let (cs, ct) = s_t_invariants(&d.scaled(&c), &v).unwrap();
        prop_assert_eq!(&cs, &(&c * &s));
        prop_assert_eq!(&ct, &(&c * &t));
        prop_assert!(&t / rint(fan.rank as i64 + 1) <= s && s <= t);
    }

    #[test]
    fn s_linear_on_cones(seed in any::<u64>()) {
        let mut r = rng(seed);
        let corpus = volume_corpus();
        let (_, fan) = corpus.choose(&mut r).unwrap();
        let d = random_big_divisor(&mut r, fan);
        let cone = &fan.cones[r.gen_range(0..fan.cones.len())];
        let coeffs: Vec<i64> = cone.iter().map(|_| r.gen_range(0..=3)).collect();
        prop_assume!(coeffs.iter().any(|&c| c > 0));
        let mut v = LatticeVector::zero(fan.rank);
        for (&ri_, &k) in cone.iter().zip(&coeffs) {
            v = v.add(&fan.rays[ri_].scaled(&int(k)));
        }
        let content = from_int(&v.content().unwrap());
        let prim = LatticeVector::from_rats(&v.to_rats().iter().map(|x| x / &content).collect::<Vec<_>>()).unwrap();
        let combo: Rat = cone.iter().zip(&coeffs).map(|(&ri_, &k)| rint(k) * s_invariant(&d, &fan.rays[ri_]).unwrap()).sum();
        prop_assert_eq!(content * s_invariant(&d, &prim).unwrap(), combo);
    }

    #[test]
    fn weighted_s_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let corpus = volume_corpus();
        let (_, fan) = corpus.choose(&mut r).unwrap();
        let d = random_big_divisor(&mut r, fan);
        let extra = loop {
            let c: Vec<Rat> = (0..fan.rays.len()).map(|_| rint(r.gen_range(0..=2))).collect();
            let e = ToricDivisor::new(fan.clone(), c).unwrap();
            if e.is_big() { break e; }
        };
        let d2 = d.plus(&extra);
        let v = random_primitive(&mut r, fan.rank, 3);
        let lhs = d.volume().unwrap() * s_invariant(&d, &v).unwrap();
        let rhs = d2.volume().unwrap() * s_invariant(&d2, &v).unwrap();
        prop_assert!(lhs <= rhs);
    }

    #[test]
    fn surface_dual_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let surfaces = surfaces();
        let (_, fan) = surfaces.choose(&mut r).unwrap();
        let d = random_big_divisor(&mut r, fan);
        let flag = random_flag(&mut r, fan, 2);
        let (s1, s2) = s_via_surface_zariski(fan, &d, &flag).unwrap();
        prop_assert_eq!(flag_s_invariants(&d, &flag).unwrap(), vec![s1, s2]);
    }
}

fn small_problem(r: &mut rand_chacha::ChaCha8Rng, k: usize) -> CoupledProblem {
    let surfaces = surfaces();
    let (_, fan) = surfaces.choose(r).unwrap().clone();
    let b = BoundaryData::new(&fan, boundary_coeffs(r, fan.rays.len())).unwrap();
    let terms = (0..k).map(|_| (random_rat(r, 1, 2, 2), random_big_divisor(r, &fan))).collect();
    let mut cands = fan.rays.clone();
    cands.push(random_primitive(r, 2, 3));
    cands.sort();
    cands.dedup();
    CoupledProblem::new(fan, b, terms, cands, Vec::new()).unwrap()
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn delta_weight_monotone(seed in any::<u64>(), k in 1usize..=3) {
        let mut r = rng(seed);
        let p = small_problem(&mut r, k);
        let d = coupled_thresholds(&p).unwrap();
        let heavier: Vec<Rat> = p.terms.iter().map(|(w, _)| w + random_rat(&mut r, 0, 1, 3)).collect();
        let d2 = coupled_thresholds(&p.with_weights(&heavier).unwrap()).unwrap();
        prop_assert!(d2.delta_upper <= d.delta_upper);
        prop_assert!(d.alpha_upper <= d.delta_upper && d.delta_upper <= rint(3) * &d.alpha_upper);
    }

    #[test]
    fn delta_boundary_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = small_problem(&mut r, 1);
        let d = coupled_thresholds(&p).unwrap().delta_upper;
        let raised: Vec<Rat> = p.boundary.coefficients.iter().map(|b| (b + rat(r.gen_range(0..=1), 8)).min(rat(7, 8))).collect();
        let q = CoupledProblem::new(p.fan.clone(), BoundaryData::new(&p.fan, raised).unwrap(), p.terms.clone(), p.candidates.clone(), Vec::new()).unwrap();
        prop_assert!(coupled_thresholds(&q).unwrap().delta_upper <= d);
    }

    /// Each candidate ratio is continuous along a segment of divisors: its
    /// differences shrink when the step is halved, and δ is their minimum.
    #[test]
    fn delta_continuous_along_segments(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = small_problem(&mut r, 1);
        let (w, d0) = p.terms[0].clone();
        let d1 = random_big_divisor(&mut r, &p.fan);
        let at = |s: &Rat| {
            let ds = d0.scaled(&(Rat::one() - s)).plus(&d1.scaled(s));
            coupled_thresholds(&p.with_terms(vec![(w.clone(), ds)]).unwrap()).unwrap()
        };
        let s = rat(r.gen_range(1..8), 8);
        let base = at(&s);
        let min = base.candidates.iter().map(|c| c.delta_ratio.clone()).min().unwrap();
        prop_assert_eq!(&min, &base.delta_upper);
        let diffs = |k: u32| {
            let next = at(&(&s + &Rat::new(Int::one(), Int::one() << k)));
            base.candidates.iter().zip(&next.candidates).map(|(a, b)| (&b.delta_ratio - &a.delta_ratio).abs()).collect::<Vec<Rat>>()
        };
        // A jump keeps the difference near its size; a kink only changes the slope.
        let coarse: Vec<Vec<Rat>> = (6..=9).map(diffs).collect();
        let fine = diffs(12);
        for (i, d) in fine.iter().enumerate() {
            let worst = coarse.iter().map(|c| c[i].clone()).max().unwrap();
            prop_assert!(d * rint(4) <= worst, "difference {} after {}", d, worst);
        }
    }

    #[test]
    fn certified_flags_match_oracles(m in 0u32..=3, a in 1i64..=4, b in 1i64..=6) {
        let t = [(rint(1), rint(a), rint(b))];
        let rep = coupled_thresholds(&hirzebruch_problem(m, &t).unwrap()).unwrap();
        if rep.certified {
            prop_assert_eq!(&rep.delta_upper, &hirzebruch_oracle(m, &t).unwrap().delta);
            prop_assert_eq!(rep.delta_lower.as_ref(), Some(&rep.delta_upper));
        }
    }
}
