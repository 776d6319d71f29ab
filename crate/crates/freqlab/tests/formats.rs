use freqlab::spec::{parse_rational, parse_spec, FrequencySpec, RationalText};
use freqlab_core::exactreal::Rational;
use num_bigint::BigInt;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..10_000, 1i64..500)
        .prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn leaf() -> impl Strategy<Value = FrequencySpec> {
    prop_oneof![
        (1u64..1000).prop_map(|n| FrequencySpec::LogIntegers { n }),
        (1u32..20, 1u64..1_000_000)
            .prop_map(|(j, max_values)| FrequencySpec::Bayart { j, max_values }),
        (
            rational(),
            1u32..20,
            prop::option::of(any::<u64>()),
            1u64..1_000_000
        )
            .prop_map(|(p, j, seed, max_values)| FrequencySpec::Bourgain {
                p: RationalText(p),
                j,
                seed,
                max_values
            }),
        (
            prop::collection::vec(rational(), 1..4),
            0u64..20,
            rational(),
            1u64..1_000_000
        )
            .prop_map(|(a, m, x, max_values)| {
                FrequencySpec::Hurwitz {
                    alphas: a.into_iter().map(RationalText).collect(),
                    m,
                    cutoff: RationalText(x),
                    max_values,
                }
            }),
        (prop::collection::vec(0u64..50, 1..6), 1u64..1_000_000)
            .prop_map(|(sizes, max_values)| FrequencySpec::QliFormal { sizes, max_values }),
    ]
}

fn spec() -> impl Strategy<Value = FrequencySpec> {
    leaf().prop_recursive(3, 8, 2, |inner| {
        (inner.clone(), inner, any::<bool>()).prop_map(|(l, r, disjoint_span)| {
            FrequencySpec::Union {
                left: Box::new(l),
                right: Box::new(r),
                disjoint_span,
            }
        })
    })
}

proptest! {
    #[test]
    fn rational_text_round_trips(r in rational()) {
        prop_assert_eq!(parse_rational(&r.to_string()).unwrap(), r);
    }

    #[test]
    fn spec_round_trips_through_json(s in spec()) {
        let text = serde_json::to_string_pretty(&s).unwrap();
        prop_assert_eq!(parse_spec(&text, "mem").unwrap(), s);
    }
}
