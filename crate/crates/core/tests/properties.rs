use std::sync::Arc;

use a1lab::curves::{admissible_multiplicities, contact_certificate, interpolate, projectively_equal, pushforward};
use a1lab::dp::{FamilySpec, FiberParams};
use a1lab::poly::{sylvester_resultant, MultiPoly, RingUniPoly, UniPoly};
use a1lab::{BoundarySpec, CurveParams, Fe, GaloisField};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIELDS: [(u64, usize); 6] = [(2, 3), (2, 6), (3, 2), (3, 4), (5, 2), (7, 1)];

fn gf(i: usize) -> GaloisField {
    let (p, k) = FIELDS[i % FIELDS.len()];
    GaloisField::new(p, k, 0).unwrap()
}

fn poly(f: &GaloisField, rng: &mut ChaCha8Rng, deg: usize) -> UniPoly {
    UniPoly::new(f, (0..=deg).map(|_| f.sample(rng)).collect())
}

fn boundary(f: &GaloisField, rng: &mut ChaCha8Rng) -> Arc<BoundarySpec> {
    Arc::new(BoundarySpec::random(f, rng).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn divrem_round_trip(fi in 0usize..6, seed: u64, da in 0usize..12, db in 0usize..6) {
        let f = gf(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = poly(&f, &mut rng, da);
        let b = poly(&f, &mut rng, db);
        prop_assume!(!b.is_zero());
        let (q, r) = a.divrem(&b).unwrap();
        prop_assert_eq!(q.mul(&b).add(&r), a);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn radical_divides_and_is_separable(fi in 0usize..6, seed: u64, dg in 1usize..4, dh in 0usize..4, frob: bool) {
        let f = gf(fi);
        let p = f.characteristic();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = poly(&f, &mut rng, dg);
        let h = poly(&f, &mut rng, dh);
        prop_assume!(!g.is_zero() && !h.is_zero());
        // `frob` puts the whole polynomial in k[t^p], exercising the zero-derivative branch.
        let target = if frob { g.frobenius_power() } else { g.pow(p).mul(&h) };
        let rad = target.squarefree_part().unwrap();
        prop_assert!(rad.divides(&target).unwrap());
        prop_assert!(rad.is_separable());
        let n = target.degree().unwrap().max(1) as u64;
        prop_assert!(target.divides(&rad.pow(n)).unwrap());
    }

    #[test]
    fn distinct_roots_add_over_coprime_products(fi in 0usize..6, seed: u64, da in 1usize..5, db in 1usize..5) {
        let f = gf(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = poly(&f, &mut rng, da);
        let b = poly(&f, &mut rng, db);
        prop_assume!(!a.is_zero() && !b.is_zero() && a.gcd(&b).degree() == Some(0));
        let ab = a.mul(&b);
        prop_assert_eq!(
            ab.distinct_root_count().unwrap(),
            a.distinct_root_count().unwrap() + b.distinct_root_count().unwrap()
        );
    }

    #[test]
    fn pullback_is_a_ring_homomorphism(fi in 0usize..6, seed: u64) {
        let f = gf(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let random_multi = |rng: &mut ChaCha8Rng| {
            let terms: Vec<(Vec<u32>, Fe)> = (0..4)
                .map(|_| ((0..3).map(|_| rng.random_range(0..3)).collect(), f.sample(rng)))
                .collect();
            MultiPoly::from_terms(&f, 3, terms).unwrap()
        };
        let a = random_multi(&mut rng);
        let b = random_multi(&mut rng);
        let subs: Vec<UniPoly> = (0..3).map(|_| poly(&f, &mut rng, 3)).collect();
        let pa = a.pullback(&subs).unwrap();
        let pb = b.pullback(&subs).unwrap();
        prop_assert_eq!(a.mul(&b).pullback(&subs).unwrap(), pa.mul(&pb));
        prop_assert_eq!(a.add(&b).pullback(&subs).unwrap(), pa.add(&pb));
    }

    #[test]
    fn resultant_vanishes_on_common_factor(fi in 0usize..6, seed: u64, dc in 1usize..3, da in 0usize..3, db in 0usize..3) {
        let f = gf(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = poly(&f, &mut rng, dc);
        prop_assume!(c.degree() == Some(dc));
        let lift = |u: &UniPoly| {
            let coeffs = u.coeffs().iter().map(|&x| MultiPoly::constant(&f, 1, x)).collect();
            RingUniPoly::new(&f, 1, coeffs).unwrap()
        };
        let a = c.mul(&poly(&f, &mut rng, da));
        let b = c.mul(&poly(&f, &mut rng, db));
        prop_assume!(!a.is_zero() && !b.is_zero());
        let r = sylvester_resultant(&lift(&a), &lift(&b)).unwrap();
        prop_assert!(r.is_zero());
    }

    #[test]
    fn frobenius_is_an_automorphism(fi in 0usize..6, seed: u64) {
        let f = gf(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (f.sample(&mut rng), f.sample(&mut rng));
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.pth_root(f.frobenius(a)), a);
        prop_assert_eq!(f.frobenius(f.pth_root(a)), a);
        prop_assert_eq!(f.frobenius(a) == f.frobenius(b), a == b);
    }

    #[test]
    fn contact_identity_for_all_admissible_params(fi in 0usize..6, seed: u64, d in 1usize..14) {
        let f = gf(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = boundary(&f, &mut rng);
        for m in admissible_multiplicities(f.characteristic(), d) {
            let params = CurveParams::random(b.clone(), d, m, rng.random(), &mut rng).unwrap();
            let built = params.build().unwrap();
            prop_assert!(contact_certificate(&b, &built.x).is_ok());
        }
    }

    #[test]
    fn reparameterizations_compose(fi in 0usize..6, seed: u64, d in 1usize..10) {
        let f = gf(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = boundary(&f, &mut rng);
        let ms = admissible_multiplicities(f.characteristic(), d);
        let m = ms[rng.random_range(0..ms.len())];
        let params = CurveParams::random(b, d, m, false, &mut rng).unwrap();
        let (l1, c1) = (f.sample_nonzero(&mut rng), f.sample(&mut rng));
        let (l2, c2) = (f.sample_nonzero(&mut rng), f.sample(&mut rng));
        let twice = params.reparameterize(l1, c1).unwrap().reparameterize(l2, c2).unwrap();
        let once = params.reparameterize(f.mul(l1, l2), f.add(f.mul(l1, c2), c1)).unwrap();
        prop_assert_eq!(twice.build().unwrap().x, once.build().unwrap().x);
    }

    #[test]
    fn psi_pulls_back_to_zero_on_every_fiber(fi in 0usize..6, seed: u64, extra in 0usize..5, degenerate: bool) {
        let f = gf(fi);
        let p = f.characteristic() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = boundary(&f, &mut rng);
        let spec = FamilySpec::sample(b, p + extra, &mut rng);
        prop_assume!(spec.is_ok());
        let spec = Arc::new(spec.unwrap());
        let fiber = if degenerate {
            FiberParams::degenerate(spec, &mut rng)
        } else {
            FiberParams::random(spec, &mut rng)
        };
        prop_assert!(fiber.psi_pullback_zero().is_ok(), "{:?}", fiber.psi_pullback_zero());
    }

    #[test]
    fn interpolated_curve_meets_every_point(fi in 2usize..6, seed: u64, n in 1usize..6) {
        let f = gf(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = boundary(&f, &mut rng);
        let points: Vec<[Fe; 3]> = (0..n)
            .map(|_| {
                let q = pushforward(&b, f.sample(&mut rng), f.sample(&mut rng));
                let s = f.sample_nonzero(&mut rng);
                q.map(|c| f.mul(c, s))
            })
            .filter(|q| q.iter().any(|c| !c.is_zero()))
            .collect();
        prop_assume!(!points.is_empty());
        let interp = interpolate(&b, &points, seed);
        prop_assume!(interp.is_ok());
        let interp = interp.unwrap();
        let built = interp.params.build().unwrap();
        prop_assert!(contact_certificate(&b, &built.x).is_ok());
        for pt in &points {
            prop_assert!(interp.nodes.iter().any(|&t| projectively_equal(&f, pt, &built.x.eval(t))));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gradient_closed_form(pi in 0usize..3, seed: u64, extra in 0usize..6) {
        let (p, k) = [(2u64, 6usize), (3, 4), (5, 2)][pi];
        let f = GaloisField::new(p, k, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = boundary(&f, &mut rng);
        let spec = FamilySpec::sample(b, p as usize + extra, &mut rng);
        prop_assume!(spec.is_ok());
        let spec = spec.unwrap();
        prop_assert!(spec.gradient_check().is_ok(), "{:?}", spec.gradient_check());
    }
}
