use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use orbicalc_core::{BaseMode, FiberComponent, FibrationData, LowerTerm, Multiplicity, TwoStageData};
use proptest::prelude::*;

fn mult_strategy() -> impl Strategy<Value = Multiplicity> {
    prop_oneof![
        8 => (1u64..=12).prop_map(|m| Multiplicity::integer(m).unwrap()),
        1 => Just(Multiplicity::infinity()),
    ]
}

fn fibre_strategy() -> impl Strategy<Value = Vec<(u64, u64)>> {
    prop::collection::vec((1u64..=20, 1u64..=12), 1..6)
}

fn fibration(fibre: &[(u64, u64)]) -> FibrationData {
    let comps = fibre
        .iter()
        .map(|&(t, m)| FiberComponent::integral(t, m).unwrap())
        .collect();
    FibrationData::new([("D", comps)]).unwrap()
}

proptest! {
    #[test]
    fn gcd_divides_every_weight_and_inf_is_a_weight(fibre in fibre_strategy()) {
        let fd = fibration(&fibre);
        let g = fd.base_multiplicity("D", BaseMode::Gcd).unwrap().as_integer().unwrap();
        let inf = fd.base_multiplicity("D", BaseMode::Inf).unwrap().as_integer().unwrap();
        let weights: Vec<BigInt> = fibre.iter().map(|&(t, m)| BigInt::from(t * m)).collect();
        prop_assert!(weights.iter().all(|w| w.is_multiple_of(&g)));
        prop_assert_eq!(&inf, weights.iter().min().unwrap());
        prop_assert!(g <= inf);
        // Oracle: gcd by repeated subtraction-free Euclid over the raw weights.
        let oracle = weights.iter().fold(BigInt::from(0), |acc, w| acc.gcd(w));
        prop_assert_eq!(g, oracle);
    }

    #[test]
    fn inf_base_is_monotone(fibre in fibre_strategy(), idx in 0usize..6, bump in 1u64..5) {
        let before = fibration(&fibre).base_multiplicity("D", BaseMode::Inf).unwrap();
        let mut raised = fibre.clone();
        let i = idx % raised.len();
        raised[i].1 += bump;
        let after = fibration(&raised).base_multiplicity("D", BaseMode::Inf).unwrap();
        prop_assert!(before <= after);
    }

    #[test]
    fn composition_rule(
        upper in prop::collection::vec(
            prop::collection::vec((1u64..=20, mult_strategy()), 1..4), 1..4),
        lower in prop::collection::vec(
            prop::collection::vec((1u64..=20, 0usize..4), 1..4), 1..3),
    ) {
        let fibres: Vec<(String, Vec<FiberComponent>)> = upper
            .iter()
            .enumerate()
            .map(|(i, comps)| {
                (format!("E{i}"), comps.iter().map(|(t, m)| FiberComponent::new(*t, m.clone()).unwrap()).collect())
            })
            .collect();
        let n = fibres.len();
        let fd = FibrationData::new(fibres).unwrap();
        let lower: Vec<(String, Vec<LowerTerm>)> = lower
            .iter()
            .enumerate()
            .map(|(i, terms)| {
                (format!("F{i}"), terms.iter().map(|&(s, j)| LowerTerm { s, y_label: format!("E{}", j % n) }).collect())
            })
            .collect();
        let ts = TwoStageData::new(fd, lower).unwrap();
        let composed = ts.compose_base().unwrap();
        prop_assert!(composed.agree(), "{:?}", composed);
    }
}

#[test]
fn infinite_components_only_matter_when_alone() {
    let fd = FibrationData::new([
        ("A", vec![FiberComponent::new(3, Multiplicity::infinity()).unwrap()]),
        (
            "B",
            vec![
                FiberComponent::new(3, Multiplicity::infinity()).unwrap(),
                FiberComponent::integral(2, 5).unwrap(),
            ],
        ),
    ])
    .unwrap();
    assert!(fd.base_multiplicity("A", BaseMode::Inf).unwrap().is_infinite());
    assert_eq!(fd.base_multiplicity("B", BaseMode::Inf).unwrap(), 10u64);
    assert!(fd.base_multiplicity("B", BaseMode::Gcd).is_err());
}

#[test]
fn rational_weights() {
    let fd = FibrationData::new([(
        "D",
        vec![
            FiberComponent::new(2, Multiplicity::ratio(3, 2).unwrap()).unwrap(),
            FiberComponent::new(1, Multiplicity::ratio(7, 2).unwrap()).unwrap(),
        ],
    )])
    .unwrap();
    let m = fd.base_multiplicity("D", BaseMode::Inf).unwrap();
    assert_eq!(m.finite_value().unwrap(), &BigRational::from_integer(3.into()));
    assert!(fd.base_multiplicity("D", BaseMode::Gcd).is_err());
}
