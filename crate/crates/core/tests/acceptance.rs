//! End-to-end acceptance checks, one line per criterion.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use conreach::corpus::{self, Shape};
use conreach::decide::{self, Case, Status, DEFAULT_CAP};
use conreach::exactla::{int, Rat, Subspace};
use conreach::geomctrl::{self, Sigma};
use conreach::io::{Instance, SystemFile};
use conreach::polyhedra::Polyhedron;
use conreach::setmaps::{dual_reach_direct, forward_from_tstar, ConstrainedMap, MapTag, Scalar, SeqMethod, SeqMode};

type Outcome = Result<String, String>;

/// Criteria whose identity does not hold for non-conic constraint sets; they
/// still run and print FAIL with a counterexample.
const KNOWN_FALSE: &[usize] = &[3];

fn fixture(name: &str) -> SystemFile {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    SystemFile::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn system(name: &str) -> (Sigma, Polyhedron) {
    let f = fixture(name);
    let (s, y) = f.system().expect("system fixture");
    (s.clone(), y.clone())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn strong_corpus(seed: u64, count: usize) -> Vec<(Sigma, Polyhedron)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    corpus::instances(
        &mut rng,
        Shape::default(),
        count,
        20 * count,
        |s, y| matches!(decide::classify(s, y), Ok(t) if t.variant == Case::Case1Strong),
    )
}

fn ex1_end_to_end() -> Outcome {
    let start = Instant::now();
    let (s, y) = system("ex1.json");
    let r = decide::analyze(&s, &y, DEFAULT_CAP).map_err(|e| e.to_string())?;
    ensure(r.case.variant == Case::Case1Weak, || format!("case {:?}", r.case.variant))?;
    ensure(r.case.k_meets_interior && !r.case.k_plus_y_full, || format!("{:?}", r.case))?;
    ensure(r.subspaces.tstar.is_zero(), || "T* not zero".into())?;
    ensure(r.subspaces.ksub == Subspace::from_vectors(2, &[vec![int(1), int(0)]]), || "K wrong".into())?;
    let held = r.conditions.holds();
    ensure(!held[3], || format!("condition (d) holds: {held:?}"))?;
    let cert = r.conditions.d.certificate().ok_or("no certificate")?;
    ensure(
        cert.exact
            && cert.lambda == Scalar::Exact(int(1))
            && cert.q == vec![Scalar::Exact(int(1)), Scalar::Exact(int(1))],
        || format!("certificate {cert:?}"),
    )?;
    ensure(r.x_stable_at == Some(2) && r.r_stable_at == Some(4), || {
        format!("stable at {:?}/{:?}", r.x_stable_at, r.r_stable_at)
    })?;
    ensure(r.feasible_limit() == Some(&Polyhedron::cube(2, &int(1))), || "X(F) wrong".into())?;
    ensure(r.reach_limit() == Some(&Polyhedron::cube(2, &int(2))), || "R(F) wrong".into())?;
    ensure(r.status() == Status::Reachable, || format!("status {:?}", r.status()))?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok(format!("{t:.2?}"))
}

fn duality(corpus: &[(Sigma, Polyhedron)]) -> Outcome {
    let start = Instant::now();
    ensure(corpus.len() >= 50, || format!("only {} strong instances", corpus.len()))?;
    for (i, (s, y)) in corpus.iter().enumerate() {
        let ctx = |what: &str| format!("instance {i} ({s:?}, {y:?}): {what}");
        let f = ConstrainedMap::build(s, y, MapTag::F).map_err(|e| ctx(&e.to_string()))?;
        let fp = ConstrainedMap::build(s, y, MapTag::Fpolar).map_err(|e| ctx(&e.to_string()))?;
        let depth = 4.max(s.n() + 1);
        let xs = f.sequence(depth, SeqMode::Feasible, SeqMethod::Iterate).map_err(|e| ctx(&e.to_string()))?;
        let rs = fp.sequence(4, SeqMode::Reach, SeqMethod::Iterate).map_err(|e| ctx(&e.to_string()))?;
        for l in 1..=4 {
            let polar = xs[l - 1].polar().map_err(|e| ctx(&e.to_string()))?;
            let direct = dual_reach_direct(s, y, l).map_err(|e| ctx(&e.to_string()))?;
            ensure(polar == rs[l - 1].negate(), || ctx(&format!("polar(X_{l}) != -R_{l}(F°)")))?;
            ensure(direct == rs[l - 1], || ctx(&format!("stacked R_{l}(F°) differs from iterate")))?;
        }
        let n = s.n();
        ensure(xs[n] == xs[n - 1], || ctx("X_{n+1} != X_n"))?;
    }
    Ok(format!("{} instances, {:.2?}", corpus.len(), start.elapsed()))
}

/// `polar(Λ_{n+ℓ} Θ_{n+ℓ}^{-1}(Y^ℓ × {0}))` computed from `(Y^ℓ)° × R^{ns}`.
fn polar_of_forward(s: &Sigma, y: &Polyhedron, l: usize) -> Result<Polyhedron, String> {
    let (_, lam, t) = geomctrl::recursive_matrices(s, s.n() + l).map_err(|e| e.to_string())?;
    let z = y.power(l).polar().map_err(|e| e.to_string())?.product(&Polyhedron::universe(s.n() * s.s()));
    let w = z.image(&t.transpose()).map_err(|e| e.to_string())?;
    w.preimage(&lam.transpose()).map_err(|e| e.to_string())
}

fn tstar_identity(corpus: &[(Sigma, Polyhedron)]) -> Outcome {
    let mut broken = Vec::new();
    for (i, (s, y)) in corpus.iter().enumerate() {
        let ctx = |what: &str| format!("instance {i} ({s:?}, {y:?}): {what}");
        let f = ConstrainedMap::build(s, y, MapTag::F).map_err(|e| ctx(&e.to_string()))?;
        let fp = ConstrainedMap::build(s, y, MapTag::Fpolar).map_err(|e| ctx(&e.to_string()))?;
        let mut fwd = Polyhedron::from_subspace(&geomctrl::tstar(s));
        let mut back = Polyhedron::from_subspace(&geomctrl::vstar(&s.dual()));
        for l in 1..=3 {
            fwd = f.image(&fwd).map_err(|e| ctx(&e.to_string()))?;
            back = fp.preimage(&back).map_err(|e| ctx(&e.to_string()))?;
            let stacked = forward_from_tstar(s, y, l).map_err(|e| ctx(&e.to_string()))?;
            ensure(stacked == fwd, || ctx(&format!("stacked F^{l}(T*) differs from iterate")))?;
            let polar = fwd.polar().map_err(|e| ctx(&e.to_string()))?;
            ensure(polar == polar_of_forward(s, y, l)?, || ctx(&format!("polar of stacked F^{l}(T*)")))?;
            if back != polar {
                ensure(l > 1, || ctx("identity fails at l = 1"))?;
                broken.push((i, l));
                break;
            }
        }
    }
    // A = 2, B = 1, C = 0, D = 1, Y = [-1, 1]: F^2(T*) = [-3, 3] but (F°)^-2(R) = [-1/2, 1/2]
    let (s, y) = system("ex5.json");
    let fp = ConstrainedMap::build(&s, &y, MapTag::Fpolar).map_err(|e| e.to_string())?;
    let back =
        fp.preimage(&fp.preimage(&Polyhedron::universe(1)).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let polar = forward_from_tstar(&s, &y, 2).map_err(|e| e.to_string())?.polar().map_err(|e| e.to_string())?;
    if broken.is_empty() && back == polar {
        return Ok(format!("{} instances", corpus.len()));
    }
    Err(format!(
        "identity fails for non-conic Y at l >= 2 on {} of {} instances (first: {:?}); EX5 at l = 2: (F°)^-2(V*) = {:?}, polar(F^2(T*)) = {:?}; \
         l = 1, the stacked F^l(T*) and polar(F^l(T*)) = (Λ^T)^-1 Θ^T[(Y^l)° x R^ns] hold on all",
        broken.len(),
        corpus.len(),
        broken.first(),
        back.vrep_json().vertices,
        polar.vrep_json().vertices,
    ))
}

fn oracle_agreement(corpus: &[(Sigma, Polyhedron)]) -> Outcome {
    let mut both = 0;
    for (i, (s, y)) in corpus.iter().enumerate() {
        let c = decide::oracle_compare(s, y, DEFAULT_CAP).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(c.passed, || format!("instance {i} ({s:?}, {y:?}): {c:?}"))?;
        if c.spectral.is_some() && c.direct.is_some() {
            both += 1;
        }
    }
    ensure(both > 0, || "no instance decided by both routes".into())?;
    Ok(format!("{} instances, {both} decided by both routes", corpus.len()))
}

fn case2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let corpus = corpus::instances(
        &mut rng,
        Shape::default(),
        50,
        5000,
        |s, y| matches!(decide::classify(s, y), Ok(t) if t.variant == Case::Case2),
    );
    ensure(corpus.len() >= 20, || format!("only {} case 2 instances", corpus.len()))?;
    for (i, (s, y)) in corpus.iter().enumerate() {
        let ctx = |what: &str| format!("instance {i} ({s:?}, {y:?}): {what}");
        let t = Polyhedron::from_subspace(&geomctrl::tstar(s));
        let f = ConstrainedMap::build(s, y, MapTag::F).map_err(|e| ctx(&e.to_string()))?;
        let mut r = Polyhedron::origin(s.n());
        for l in 1..=DEFAULT_CAP {
            let next = f.image(&r).map_err(|e| ctx(&e.to_string()))?;
            ensure(next.subset_eq(&t).unwrap(), || ctx(&format!("R_{l} not inside T*")))?;
            if l == s.n() {
                ensure(next == t, || ctx("R_n != T*"))?;
            }
            // F(R) = R makes every later term equal
            if next == r && l > s.n() {
                break;
            }
            r = next;
        }
    }
    let (s, y) = system("ex2.json");
    let r = decide::analyze(&s, &y, DEFAULT_CAP).map_err(|e| e.to_string())?;
    ensure(r.case.variant == Case::Case2 && r.status() == Status::NotReachable, || {
        format!("EX2: {:?} {:?}", r.case.variant, r.status())
    })?;
    let (s, y) = system("ex3.json");
    let r = decide::analyze(&s, &y, DEFAULT_CAP).map_err(|e| e.to_string())?;
    ensure(r.status() == Status::Inconclusive, || format!("EX3: {:?}", r.status()))?;
    ensure(r.verdict.notes.iter().any(|n| n.starts_with("contraction")), || {
        format!("EX3 notes {:?}", r.verdict.notes)
    })?;
    Ok(format!("{} instances, EX2 NotReachable, EX3 Inconclusive", corpus.len()))
}

fn with_origin(p: &Polyhedron) -> Polyhedron {
    let mut v = p.vertices().to_vec();
    v.push(vec![int(0); p.dim()]);
    Polyhedron::from_vrep(p.dim(), v, p.rays().to_vec(), p.lineality().to_vec()).unwrap()
}

fn calculus() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut tested = 0;
    while tested < 250 {
        let d = rng.gen_range(1..=4);
        let p = corpus::polyhedron(&mut rng, d);
        if p.is_empty() {
            continue;
        }
        tested += 1;
        let ctx = |what: &str| format!("{p:?}: {what}");
        let err = |e: conreach::polyhedra::PolyError| ctx(&e.to_string());
        let p0 = with_origin(&p);
        let polar = p0.polar().map_err(err)?;
        ensure(polar.polar().map_err(err)? == p0, || ctx("polar involution"))?;
        let rec = p.recession_cone().map_err(err)?;
        ensure(p.barrier_cone().map_err(err)? == rec.neg_polar_cone(), || ctx("barrier cone"))?;
        ensure(polar.recession_cone().map_err(err)? == p0.neg_polar_cone(), || ctx("recession of polar"))?;
        ensure(p.conic_hull().map_err(err)?.polar().map_err(err)? == p.neg_polar_cone(), || {
            ctx("polar of conic hull")
        })?;
        let h = Polyhedron::from_hrep(d, p.ineqs().to_vec(), p.eqs().to_vec()).map_err(err)?;
        let v =
            Polyhedron::from_vrep(d, p.vertices().to_vec(), p.rays().to_vec(), p.lineality().to_vec()).map_err(err)?;
        ensure(h == p && v == p, || ctx("double description round trip"))?;
        let mu: Rat = p.hyperbolicity_witness().map_err(err)?;
        let hull = Polyhedron::cube(d, &mu).minkowski_sum(&rec).map_err(err)?;
        ensure(p.subset_eq(&hull).map_err(err)?, || ctx("hyperbolicity witness"))?;
    }
    Ok(format!("{tested} polyhedra"))
}

fn geometric() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let shape = Shape { max_n: 4, max_m: 3, max_s: 3 };
    let count = 150;
    for i in 0..count {
        let s = corpus::system(&mut rng, shape);
        let ctx = |what: &str| format!("system {i} ({s:?}): {what}");
        let (t, ts) = geomctrl::tstar_steps(&s);
        let (_, vs) = geomctrl::vstar_steps(&s);
        ensure(t == geomctrl::tstar_direct(&s), || ctx("T* iteration differs from stacked formula"))?;
        let dual = s.dual();
        let k = geomctrl::ksub(&s, &t);
        ensure(k.perp() == geomctrl::lsub(&dual, &geomctrl::vstar(&dual)), || ctx("K^perp != L of the dual"))?;
        ensure(ts <= s.n() && vs <= s.n(), || ctx(&format!("steps {ts}/{vs} exceed n")))?;
    }
    Ok(format!("{count} systems"))
}

fn ex6() -> Outcome {
    let f = fixture("ex6.json");
    let cap = f.options.cap;
    let h = match &f.instance {
        Instance::Raw(h) => h.clone(),
        Instance::System { .. } => return Err("EX6 is not a raw map".into()),
    };
    let xs = h.sequence(cap, SeqMode::Feasible, SeqMethod::Iterate).map_err(|e| e.to_string())?;
    for (l, w) in xs.windows(2).enumerate() {
        ensure(w[0] != w[1], || format!("X stabilized at step {}", l + 1))?;
    }
    let rs = h.sequence(3, SeqMode::Reach, SeqMethod::Iterate).map_err(|e| e.to_string())?;
    let half_line = Polyhedron::from_hrep(1, vec![(vec![int(-1)], int(0))], vec![]).unwrap();
    ensure(rs.iter().all(|r| r == &half_line), || format!("R sequence {rs:?}"))?;
    ensure(!half_line.is_universe(), || "R(H) is everything".into())?;
    Ok(format!("X strictly decreasing over {cap} steps, R(H) = [0,inf)"))
}

fn main() {
    let strong = strong_corpus(0x5eed_0002, 60);
    let checks: Vec<(usize, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, Box::new(ex1_end_to_end)),
        (2, Box::new(|| duality(&strong))),
        (3, Box::new(|| tstar_identity(&strong))),
        (4, Box::new(|| oracle_agreement(&strong))),
        (5, Box::new(case2)),
        (6, Box::new(calculus)),
        (7, Box::new(geometric)),
        (8, Box::new(ex6)),
    ];
    let mut unexpected = 0;
    for (n, check) in checks {
        let known = KNOWN_FALSE.contains(&n);
        match check() {
            Ok(detail) => {
                println!("criterion {n}: PASS ({detail})");
                if known {
                    println!("  criterion {n} is listed as known false but passed; update KNOWN_FALSE");
                    unexpected += 1;
                }
            }
            Err(why) => {
                println!("criterion {n}: FAIL ({why})");
                if known {
                    println!("  criterion {n}: known false, see README");
                } else {
                    unexpected += 1;
                }
            }
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
