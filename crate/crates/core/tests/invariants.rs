use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use conreach::corpus::{self, Shape};
use conreach::exactla::{fmt_rat, int, parse_rat, rat};
use conreach::geomctrl::{kl_subspaces, lsub, tstar, tstar_direct, vstar};
use conreach::polyhedra::Polyhedron;
use conreach::setmaps::{
    cone_eigen_search, dual_cone_set, satisfies_eigen_relation, ConeTag, ConstrainedMap, EigenSearch, Interval, MapTag,
    SeqMethod, SeqMode,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn with_origin(p: &Polyhedron) -> Polyhedron {
    let mut v = p.vertices().to_vec();
    v.push(vec![int(0); p.dim()]);
    Polyhedron::from_vrep(p.dim(), v, p.rays().to_vec(), p.lineality().to_vec()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rationals_print_canonically(p in -1000i64..1000, q in 1i64..1000) {
        let r = rat(p, q);
        let s = fmt_rat(&r);
        prop_assert_eq!(parse_rat(&s).unwrap(), r);
        prop_assert!(!s.ends_with("/1"));
    }

    #[test]
    fn representations_agree(seed in any::<u64>(), dim in 1usize..=3) {
        let p = corpus::polyhedron(&mut rng(seed), dim);
        let from_v = Polyhedron::from_vrep(dim, p.vertices().to_vec(), p.rays().to_vec(), p.lineality().to_vec());
        if !p.is_empty() {
            prop_assert_eq!(from_v.unwrap(), p.clone());
        }
        let from_h = Polyhedron::from_hrep(dim, p.ineqs().to_vec(), p.eqs().to_vec()).unwrap();
        prop_assert_eq!(from_h, p);
    }

    #[test]
    fn polar_is_an_involution(seed in any::<u64>(), dim in 1usize..=3) {
        let p = corpus::polyhedron(&mut rng(seed), dim);
        prop_assume!(!p.is_empty());
        let p0 = with_origin(&p);
        prop_assert_eq!(p0.polar().unwrap().polar().unwrap(), p0);
    }

    #[test]
    fn intersection_and_sum_bracket_the_operands(seed in any::<u64>(), dim in 1usize..=3) {
        let mut r = rng(seed);
        let a = corpus::constraint_set(&mut r, dim);
        let b = corpus::constraint_set(&mut r, dim);
        let i = a.intersect(&b).unwrap();
        let s = a.minkowski_sum(&b).unwrap();
        prop_assert!(i.subset_eq(&a).unwrap() && i.subset_eq(&b).unwrap());
        prop_assert!(a.subset_eq(&s).unwrap() && b.subset_eq(&s).unwrap());
    }

    #[test]
    fn projection_matches_elimination(seed in any::<u64>(), dim in 2usize..=4) {
        let p = corpus::polyhedron(&mut rng(seed), dim);
        let keep: Vec<usize> = (0..dim).step_by(2).collect();
        prop_assert_eq!(p.project(&keep), p.project_fm(&keep));
    }

    #[test]
    fn subspace_recursions_match_closed_forms(seed in any::<u64>()) {
        let sys = corpus::system(&mut rng(seed), Shape { max_n: 4, max_m: 2, max_s: 3 });
        prop_assert_eq!(tstar(&sys), tstar_direct(&sys));
        let dual = sys.dual();
        prop_assert_eq!(kl_subspaces(&sys).ksub.perp(), lsub(&dual, &vstar(&dual)));
    }

    #[test]
    fn graph_builders_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sys = corpus::system(&mut r, Shape { max_n: 2, max_m: 2, max_s: 2 });
        let y = corpus::constraint_set(&mut r, sys.s());
        let dd = ConstrainedMap::build_primal(&sys, &y, MapTag::F).unwrap();
        let fm = ConstrainedMap::build_primal_fm(&sys, &y, MapTag::F).unwrap();
        prop_assert_eq!(dd.graph(), fm.graph());
    }

    #[test]
    fn iterates_match_stacked_formulas(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sys = corpus::system(&mut r, Shape { max_n: 2, max_m: 2, max_s: 2 });
        let y = corpus::constraint_set(&mut r, sys.s());
        let f = ConstrainedMap::build(&sys, &y, MapTag::F).unwrap();
        for mode in [SeqMode::Reach, SeqMode::Feasible] {
            prop_assert_eq!(
                f.sequence(3, mode, SeqMethod::Iterate).unwrap(),
                f.sequence(3, mode, SeqMethod::Direct).unwrap()
            );
        }
        let xs = f.sequence(3, SeqMode::Feasible, SeqMethod::Iterate).unwrap();
        prop_assert!(xs.windows(2).all(|w| w[1].subset_eq(&w[0]).unwrap()));
    }

    #[test]
    fn exact_certificates_check_out(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sys = corpus::system(&mut r, Shape { max_n: 2, max_m: 2, max_s: 2 });
        let y = corpus::constraint_set(&mut r, sys.s());
        let cone = dual_cone_set(&y, MapTag::Fb).unwrap();
        let search = cone_eigen_search(&sys, &cone, &Interval::closed(int(0), int(1)), ConeTag::NegYb).unwrap();
        if let EigenSearch::Found(c) = search {
            if let Some((lambda, q, u)) = c.exact_parts() {
                prop_assert!(cone.contains_point(&u));
                prop_assert!(q.iter().any(|x| *x != int(0)));
                prop_assert!(satisfies_eigen_relation(&sys, &lambda, &q, &u));
            }
        }
    }
}
