use proptest::prelude::*;
use qdiff::scalars::{FieldDescriptor, Scalar};

fn fields() -> Vec<FieldDescriptor> {
    vec![
        FieldDescriptor::rational(),
        FieldDescriptor::rational_function(),
        FieldDescriptor::cyclotomic(3).unwrap(),
        FieldDescriptor::cyclotomic(5).unwrap(),
        FieldDescriptor::cyclotomic(7).unwrap(),
    ]
}

/// `Σ c_k q^k / (1 + Σ e_k q^k)`, or a plain ratio over `ℚ`.
fn build(f: &FieldDescriptor, num: &[(i64, i64)], den: &[i64]) -> Scalar {
    let mut top = f.zero();
    for (k, (p, r)) in num.iter().enumerate() {
        let term = f.from_ratio(*p, *r);
        top = &top
            + &if f.has_q() {
                &term * &f.q_power(k as i64).unwrap()
            } else {
                term
            };
    }
    let mut bottom = f.one();
    if f.has_q() {
        for (k, e) in den.iter().enumerate() {
            bottom = &bottom + &(&f.from_int(*e) * &f.q_power(k as i64 + 1).unwrap());
        }
    }
    match bottom.inv() {
        Ok(b) => &top * &b,
        Err(_) => top,
    }
}

fn scalar_parts() -> impl Strategy<Value = (Vec<(i64, i64)>, Vec<i64>)> {
    (
        prop::collection::vec((-9i64..=9, 1i64..=5), 0..4),
        prop::collection::vec(-3i64..=3, 0..3),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(pa in scalar_parts(), pb in scalar_parts(), pc in scalar_parts()) {
        for f in &fields() {
            let (a, b, c) = (build(f, &pa.0, &pa.1), build(f, &pb.0, &pb.1), build(f, &pc.0, &pc.1));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &f.zero(), a.clone());
            prop_assert_eq!(&a * &f.one(), a.clone());
            prop_assert!((&a + &(-&a)).is_zero());
            prop_assert_eq!(&a - &b, &a + &(-&b));
        }
    }

    #[test]
    fn inverses(pa in scalar_parts(), pb in scalar_parts()) {
        for f in &fields() {
            let (a, b) = (build(f, &pa.0, &pa.1), build(f, &pb.0, &pb.1));
            if a.is_zero() {
                prop_assert!(a.inv().is_err());
            } else {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
                prop_assert_eq!(&b.try_div(&a).unwrap() * &a, b.clone());
                prop_assert_eq!(a.pow(-2).unwrap(), a.inv().unwrap().pow(2).unwrap());
            }
        }
    }

    #[test]
    fn display_parses_back(pa in scalar_parts()) {
        for f in &fields() {
            let a = build(f, &pa.0, &pa.1);
            prop_assert_eq!(qdiff::expr::parse_scalar(&a.to_string(), f).unwrap(), a);
        }
    }
}

#[test]
fn root_of_unity_relations() {
    for l in [3u32, 5, 7] {
        let f = FieldDescriptor::cyclotomic(l).unwrap();
        let z = f.q().unwrap();
        assert!(z.pow(l as i64).unwrap().is_one());
        let sum = (0..l as i64).fold(f.zero(), |acc, k| &acc + &z.pow(k).unwrap());
        assert!(sum.is_zero());
        assert!(!(&z - &f.one()).is_zero());
    }
}
