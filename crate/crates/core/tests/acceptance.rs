//! Acceptance run: one line per criterion, exact arithmetic throughout.
//! Exits nonzero when any criterion fails or exceeds its time limit.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qdiff::braided_hopf::{verify_double_presentation, ActionConvention, BraidedHopf, DoubleElement};
use qdiff::expr::parse_element;
use qdiff::linalg::Echelon;
use qdiff::moment::{
    verify_moment_identity, verify_reduction_algebra, CanonicalElement, CanonicalMonomial, Reducer, ReductionDatum,
    TorusData,
};
use qdiff::qweyl::{random_skew_matrix, verify_engine, verify_power_identities, AlgebraSpec, Monomial, Normalization};
use qdiff::reduction::{
    candidate_etas, cover_fiber_points, reduced_endomorphism_algebra, restriction_kernel_check, slot_with_root,
    weight_space,
};
use qdiff::root_of_unity::{
    azumaya_membership, build_irrep, build_irrep_rank1, centralizer_basis, commutant_dimension,
    generated_algebra_dimension, random_unit, verify_center_truncation, verify_delta_power, verify_freeness,
};
use qdiff::scalars::{FieldDescriptor, Scalar};
use qdiff::Result;

type Verdict = Result<(bool, String)>;

fn fq() -> FieldDescriptor {
    FieldDescriptor::rational_function()
}

fn preset(n: usize, norm: Normalization, f: &FieldDescriptor) -> Arc<AlgebraSpec> {
    AlgebraSpec::single_parameter(n, norm, f.clone()).unwrap()
}

fn presentation_agreement() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut runs = 0;
    for n in 1..=3 {
        let mut specs = vec![preset(n, Normalization::Rescaled, &fq())];
        for _ in 0..5 {
            specs.push(AlgebraSpec::new(
                random_skew_matrix(n, 2, &mut rng),
                Normalization::Rescaled,
                fq(),
            )?);
        }
        for spec in specs {
            let r = verify_double_presentation(&spec, 3)?;
            if !r.all_passed() {
                return Ok((false, format!("{spec}: {}", r.summary())));
            }
            runs += 1;
        }
    }
    Ok((true, format!("{runs} algebras, degree bound 3")))
}

fn power_identities() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checks = 0;
    for n in 1..=3 {
        for norm in [Normalization::Rescaled, Normalization::Unscaled] {
            let specs = [
                preset(n, norm, &fq()),
                AlgebraSpec::new(random_skew_matrix(n, 2, &mut rng), norm, fq())?,
            ];
            for spec in specs {
                let r = verify_power_identities(&spec, 6)?;
                if !r.all_passed() {
                    return Ok((false, format!("{spec}: {}", r.summary())));
                }
                checks += r.len();
            }
        }
    }
    Ok((true, format!("{checks} identities, powers up to 6")))
}

fn classical_degeneration() -> Verdict {
    let f = FieldDescriptor::rational();
    for n in 1..=3 {
        let spec = AlgebraSpec::new(vec![vec![0; n]; n], Normalization::Unscaled, f.clone())?;
        let h = BraidedHopf::new(&spec);
        for conv in [ActionConvention::InverseBraid, ActionConvention::Literal] {
            for i in 0..n {
                for j in 0..n {
                    let mut expected = DoubleElement::term(Monomial::new(unit(n, j), unit(n, i)), f.one());
                    if i == j {
                        expected = expected.add(&h.one());
                    }
                    if h.heisenberg_product(&h.d(i), &h.x(j), conv) != expected {
                        return Ok((false, format!("d{}*x{} under {conv:?} (n = {n})", i + 1, j + 1)));
                    }
                    let xx = h.heisenberg_product(&h.x(i), &h.x(j), conv);
                    let dd = h.heisenberg_product(&h.d(i), &h.d(j), conv);
                    if xx != h.heisenberg_product(&h.x(j), &h.x(i), conv)
                        || dd != h.heisenberg_product(&h.d(j), &h.d(i), conv)
                    {
                        return Ok((false, format!("generators {} and {} do not commute", i + 1, j + 1)));
                    }
                }
            }
        }
        let e = parse_element("d1*x1 - x1*d1", &spec)?;
        if e.as_scalar().is_none_or(|c| !c.is_one()) {
            return Ok((false, format!("engine gives d1*x1 - x1*d1 = {e}")));
        }
    }
    Ok((true, "d_i x_j = x_j d_i + delta_ij for n <= 3".into()))
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn delta_identity() -> Verdict {
    for (n, l) in [(1, 3), (1, 5), (1, 7), (2, 3), (2, 5)] {
        let spec = preset(n, Normalization::Rescaled, &FieldDescriptor::cyclotomic(l)?);
        let r = verify_delta_power(&spec)?;
        if !r.all_passed() {
            return Ok((false, format!("(n, l) = ({n}, {l}): {}", r.summary())));
        }
    }
    Ok((true, "all five (n, l)".into()))
}

fn center_truncation() -> Verdict {
    let f = FieldDescriptor::cyclotomic(3)?;
    let s1 = preset(1, Normalization::Rescaled, &f);
    let basis = centralizer_basis(&s1, 4)?;
    // compare with span{1, x^3, d^3, x^3 d^3} directly
    let expected = ["1", "x1^3", "d1^3", "x1^3*d1^3"];
    let monos: Vec<Monomial> = (0..=4)
        .flat_map(|a| (0..=4).map(move |b| Monomial::new(vec![a], vec![b])))
        .collect();
    let coords = |e: &qdiff::qweyl::PBWElement| -> Vec<Scalar> { monos.iter().map(|m| e.coefficient(m)).collect() };
    let mut found = Echelon::new(&f, monos.len());
    for e in &basis {
        found.insert_dense(&coords(e));
    }
    let mut want = Echelon::new(&f, monos.len());
    for src in expected {
        want.insert_dense(&coords(parse_element(src, &s1)?.numerator()));
    }
    if basis.len() != 4 || !found.same_span(&want) {
        return Ok((false, format!("n = 1: centralizer has dimension {}", basis.len())));
    }
    let s2 = preset(2, Normalization::Rescaled, &f);
    let r = verify_center_truncation(&s2, 3)?;
    Ok((r.all_passed(), format!("n = 1 exact; n = 2: {}", r.summary())))
}

fn azumaya_dichotomy() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut generic_ok, mut generic_total) = (0, 0);
    let (mut split_ok, mut split_total, mut reducible) = (0, 0, 0);
    let mut dims = Vec::new();
    for l in [3u32, 5] {
        let f = FieldDescriptor::cyclotomic(l)?;
        let mut made = 0;
        while made < 20 {
            let lambda = random_unit(&f, &mut rng);
            let b: Vec<Scalar> = (0..l).map(|_| random_unit(&f, &mut rng)).collect();
            let rep = build_irrep_rank1(&lambda, &b)?;
            if !azumaya_membership(rep.character()) {
                continue;
            }
            made += 1;
            generic_total += 1;
            generic_ok += usize::from(commutant_dimension(&rep) == 1);
            let mut zeroed = b.clone();
            zeroed[rng.gen_range(0..l as usize)] = f.zero();
            let degenerate = build_irrep_rank1(&lambda, &zeroed)?;
            let c = commutant_dimension(&degenerate);
            let generated = generated_algebra_dimension(&f, &degenerate.generators())?;
            split_total += 1;
            split_ok += usize::from(c > 1);
            reducible += usize::from(generated < (l * l) as usize);
            dims.push(c);
        }
    }
    dims.sort_unstable();
    dims.dedup();
    Ok((
        generic_ok == generic_total && split_ok == split_total,
        format!(
            "all b nonzero: commutant 1 in {generic_ok}/{generic_total}; one b zero: commutant > 1 in \
             {split_ok}/{split_total} (observed commutant dimensions {dims:?}), generated algebra smaller than \
             l^2 (reducible) in {reducible}/{split_total}"
        ),
    ))
}

fn freeness() -> Verdict {
    let f = FieldDescriptor::cyclotomic(3)?;
    let mut parts = Vec::new();
    for n in 1..=2 {
        let r = verify_freeness(&preset(n, Normalization::Rescaled, &f))?;
        if !r.all_passed() {
            return Ok((false, format!("n = {n}: {}", r.summary())));
        }
        parts.push(format!("n = {n}: {} per block", 3usize.pow(2 * n as u32)));
    }
    Ok((true, parts.join("; ")))
}

fn generic_rep(
    n: usize,
    f: &FieldDescriptor,
    rng: &mut ChaCha8Rng,
) -> Result<(qdiff::root_of_unity::MatrixRep, Vec<Scalar>)> {
    let l = f.l().unwrap();
    let mut slots = Vec::new();
    let mut roots = Vec::new();
    for _ in 0..n {
        let lambda = random_unit(f, rng);
        let head: Vec<Scalar> = (1..l).map(|_| random_unit(f, rng)).collect();
        let t = random_unit(f, rng);
        slots.push(slot_with_root(&lambda, &head, &t)?);
        roots.push(t);
    }
    Ok((build_irrep(&slots, f)?, roots))
}

fn fiber_reduction() -> Verdict {
    let f = FieldDescriptor::cyclotomic(3)?;
    let l = 3usize;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut count = 0;
    for (n, a) in [(1usize, vec![vec![1]]), (2, vec![vec![1], vec![1]])] {
        let torus = TorusData::new(a)?;
        let k = l.pow((n - torus.d()) as u32);
        let big = l.pow(n as u32);
        for _ in 0..3 {
            let (rep, roots) = generic_rep(n, &f, &mut rng)?;
            for eta in candidate_etas(&roots, &torus)? {
                count += 1;
                let dim = weight_space(&rep, &torus, &eta)?.dim();
                if dim != k {
                    return Ok((false, format!("n = {n}: dim V_eta = {dim}, expected {k}")));
                }
                let r = restriction_kernel_check(&rep, &torus, &eta)?;
                let dim_j = format!("dim J = {}", big * (big - k));
                if !r.all_passed() || !r.checks.iter().any(|c| c.name == dim_j) {
                    return Ok((false, format!("n = {n}: {}", r.summary())));
                }
                let red = reduced_endomorphism_algebra(&rep, &torus, &eta)?;
                if red.dimension != k * k || !red.iso_verified {
                    return Ok((false, format!("n = {n}: reduced algebra {}", red.report.summary())));
                }
            }
        }
    }
    Ok((true, format!("{count} (rep, eta) pairs")))
}

fn cover_degree() -> Verdict {
    let f = FieldDescriptor::cyclotomic(3)?;
    let zeta = f.q()?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cases = [
        (2usize, vec![vec![1], vec![1]]),
        (3, vec![vec![1], vec![1], vec![1]]),
        (3, vec![vec![1, 0], vec![0, 1], vec![1, 1]]),
    ];
    for (n, a) in cases {
        let torus = TorusData::new(a)?;
        for _ in 0..10 {
            let roots: Vec<Scalar> = (0..n).map(|_| random_unit(&f, &mut rng)).collect();
            let mut eta = Vec::new();
            for j in 0..torus.d() {
                let mut v = zeta.pow(rng.gen_range(0..3))?;
                for (i, t) in roots.iter().enumerate() {
                    v = &v * &t.pow(torus.a()[i][j])?;
                }
                eta.push(v);
            }
            let fiber = cover_fiber_points(&roots, &torus, &eta, 10_000)?;
            if fiber.points.len() != fiber.expected {
                return Ok((
                    false,
                    format!("(n, d) = ({n}, {}): {} points", torus.d(), fiber.points.len()),
                ));
            }
            let mut off = eta.clone();
            off[0] = &off[0] * &f.from_int(2);
            let none = cover_fiber_points(&roots, &torus, &off, 10_000)?;
            if !none.points.is_empty() {
                return Ok((false, format!("incompatible eta gave {} points", none.points.len())));
            }
        }
    }
    Ok((
        true,
        "30 compatible instances with l^(n-d) points, 30 incompatible with none".into(),
    ))
}

fn moment_identity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut runs = 0;
    for n in 1..=3 {
        let spec = preset(n, Normalization::Rescaled, &fq());
        let mut made = 0;
        while made < 5 {
            let d = rng.gen_range(1..=n);
            let a: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..d).map(|_| rng.gen_range(-2..=2)).collect())
                .collect();
            let Ok(torus) = TorusData::new(a) else { continue };
            made += 1;
            let r = verify_moment_identity(&torus, &spec)?;
            if !r.all_passed() {
                return Ok((false, format!("A = {:?}: {}", torus.a(), r.summary())));
            }
            runs += 1;
        }
    }
    Ok((true, format!("{runs} random A")))
}

fn reduction_algebra() -> Verdict {
    let f = fq();
    let spec = preset(1, Normalization::Rescaled, &f);
    let eta = &f.q_power(2)? + &f.from_int(3);
    let datum = ReductionDatum::new(TorusData::new(vec![vec![1]])?, vec![eta.clone()], None)?;
    let reducer = Reducer::new(&spec, &datum)?;
    let scalar = |c: Scalar| {
        let mut e = CanonicalElement::default();
        e.add_term(
            CanonicalMonomial {
                mono: Monomial::one(1),
                alpha: vec![0],
            },
            c,
        );
        e
    };
    let one = f.one();
    let q = f.q()?;
    let first = reducer.reduce(&parse_element("x1*d1", &spec)?)?;
    if first != scalar(&eta - &one) {
        return Ok((false, format!("x1*d1 reduced to {first}")));
    }
    let second = reducer.reduce(&parse_element("x1^2*d1^2", &spec)?)?;
    let expected = &(&(&eta - &one) * &(&eta - &q)) * &q.inv()?;
    if second != scalar(expected) {
        return Ok((false, format!("x1^2*d1^2 reduced to {second}")));
    }
    let r = verify_reduction_algebra(&reducer, 100, 3, 11)?;
    if !r.all_passed() {
        return Ok((false, format!("n = 1: {}", r.summary())));
    }
    let spec2 = preset(2, Normalization::Rescaled, &f);
    let datum2 = ReductionDatum::new(TorusData::new(vec![vec![1], vec![1]])?, vec![eta], None)?;
    let r2 = verify_reduction_algebra(&Reducer::new(&spec2, &datum2)?, 100, 3, 12)?;
    Ok((
        r2.all_passed(),
        format!("closed forms exact; n = 1: {}; n = 2: {}", r.summary(), r2.summary()),
    ))
}

fn engine_soundness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut parts = Vec::new();
    for n in 1..=3 {
        for spec in [
            preset(n, Normalization::Rescaled, &fq()),
            AlgebraSpec::new(random_skew_matrix(n, 2, &mut rng), Normalization::Unscaled, fq())?,
        ] {
            let r = verify_engine(&spec, 200, 4, 14 + n as u64)?;
            if !r.all_passed() {
                return Ok((false, format!("{spec}: {}", r.summary())));
            }
        }
        parts.push(format!("n = {n}"));
    }
    Ok((
        true,
        format!("200 triples, words and pairs each for {}", parts.join(", ")),
    ))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Verdict,
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "presentation agreement",
            limit: Some(Duration::from_secs(60)),
            run: presentation_agreement,
        },
        Criterion {
            id: 2,
            name: "power and Euler identities",
            limit: Some(Duration::from_secs(10)),
            run: power_identities,
        },
        Criterion {
            id: 3,
            name: "classical degeneration",
            limit: None,
            run: classical_degeneration,
        },
        Criterion {
            id: 4,
            name: "Delta^l identity",
            limit: Some(Duration::from_secs(30)),
            run: delta_identity,
        },
        Criterion {
            id: 5,
            name: "center truncation",
            limit: None,
            run: center_truncation,
        },
        Criterion {
            id: 6,
            name: "Azumaya-locus dichotomy",
            limit: None,
            run: azumaya_dichotomy,
        },
        Criterion {
            id: 7,
            name: "rank l^(2n) freeness",
            limit: None,
            run: freeness,
        },
        Criterion {
            id: 8,
            name: "fiber reduction",
            limit: Some(Duration::from_secs(60)),
            run: fiber_reduction,
        },
        Criterion {
            id: 9,
            name: "cover degree",
            limit: None,
            run: cover_degree,
        },
        Criterion {
            id: 10,
            name: "moment identity",
            limit: None,
            run: moment_identity,
        },
        Criterion {
            id: 11,
            name: "reduction algebra sanity",
            limit: None,
            run: reduction_algebra,
        },
        Criterion {
            id: 12,
            name: "engine soundness",
            limit: None,
            run: engine_soundness,
        },
    ];
    let total_limit = Duration::from_secs(300);
    let start = Instant::now();
    let mut failed = 0;
    for c in &criteria {
        let t = Instant::now();
        let outcome = (c.run)();
        let elapsed = t.elapsed();
        let (ok, detail) = match outcome {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = c.limit.is_none_or(|lim| elapsed <= lim);
        let limit = c.limit.map_or(String::new(), |l| format!(", limit {}s", l.as_secs()));
        let tag = if ok && in_time { "PASS" } else { "FAIL" };
        let late = if in_time { "" } else { " [over time limit]" };
        println!(
            "{tag} {:2} {} ({:.2}s{limit}){late}: {detail}",
            c.id,
            c.name,
            elapsed.as_secs_f64()
        );
        failed += usize::from(!(ok && in_time));
    }
    let total = start.elapsed();
    let total_ok = total <= total_limit;
    println!(
        "{} of {} criteria passed in {:.1}s (limit {}s){}",
        criteria.len() - failed,
        criteria.len(),
        total.as_secs_f64(),
        total_limit.as_secs(),
        if total_ok { "" } else { " [over time limit]" }
    );
    if failed > 0 || !total_ok {
        std::process::exit(1);
    }
}
