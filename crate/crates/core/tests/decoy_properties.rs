use proptest::prelude::*;

use hsps_mdi::decoy::{
    decoy_conditions, kappa, symmetric_condition, vacuum_adjusted, y11_lower_bound, GainRecord, GainTable, SourcePair,
};
use hsps_mdi::keyrate::{rate_for_scenario, ChannelTables, RateSettings};
use hsps_mdi::optics::{Basis, BsmModel, LinkSpec, YieldTable};
use hsps_mdi::runner::{Scenario, ScenarioKind};
use hsps_mdi::source::{DistributionKind, HeraldingDetector, SourceSpec, TriggerClass};

fn pair(kind: DistributionKind, x: f64, eta: f64, class: TriggerClass) -> SourcePair {
    let det = HeraldingDetector::new(eta, 1e-6).unwrap();
    SourcePair::symmetric(SourceSpec::heralded(kind, x, det, class).unwrap())
}

fn observed(yt: &YieldTable, pairs: &[&SourcePair]) -> GainTable {
    let mut g = GainTable::new();
    for p in pairs {
        g.observe(yt, p).unwrap();
    }
    g
}

fn arbitrary_table() -> impl Strategy<Value = YieldTable> {
    prop::collection::vec((0.0f64..1.0, 0.0f64..0.5), 81)
        .prop_map(|cells| YieldTable::from_fn(Basis::Z, 8, |m, n| cells[m * 9 + n]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn identity_on_arbitrary_tables(
        yt in arbitrary_table(),
        eta in 0.3f64..0.95,
        mu_prime in 0.05f64..1.0,
        frac in 0.05f64..0.95,
        thermal in any::<bool>(),
    ) {
        let kind = if thermal { DistributionKind::Thermal } else { DistributionKind::Poisson };
        let weak = pair(kind, frac * mu_prime, eta, TriggerClass::Triggered);
        let strong = pair(kind, mu_prime, eta, TriggerClass::NonTriggered);
        let g = observed(&yt, &[&weak, &strong]);
        let cond = decoy_conditions(&weak, &strong, 8);
        let n = cond.k_factor * vacuum_adjusted(&g, Basis::Z, &weak, false).unwrap()
            - vacuum_adjusted(&g, Basis::Z, &strong, false).unwrap();
        let y11 = (n + kappa(&weak, &strong, cond.k_factor, &yt)) / cond.denominator;
        prop_assert!((y11 - yt.yield_at(1, 1)).abs() < 1e-9, "{} vs {}", y11, yt.yield_at(1, 1));
    }

    #[test]
    fn bound_is_sound_on_arbitrary_tables(
        yt in arbitrary_table(),
        eta in 0.3f64..0.95,
        mu_prime in 0.05f64..1.0,
        over in 1.0f64..3.0,
        which in 0usize..3,
    ) {
        let (weak, strong) = match which {
            0 => (
                pair(DistributionKind::Poisson, (1.0 - eta) * mu_prime * over, eta, TriggerClass::Triggered),
                pair(DistributionKind::Poisson, mu_prime, eta, TriggerClass::NonTriggered),
            ),
            1 => (
                pair(DistributionKind::Poisson, mu_prime / (1.0 + over), eta, TriggerClass::Triggered),
                pair(DistributionKind::Poisson, mu_prime, eta, TriggerClass::Triggered),
            ),
            _ => (
                SourcePair::symmetric(SourceSpec::coherent(mu_prime / (1.0 + over)).unwrap()),
                SourcePair::symmetric(SourceSpec::coherent(mu_prime).unwrap()),
            ),
        };
        let g = observed(&yt, &[&weak, &strong]);
        let b = y11_lower_bound(&g, Basis::Z, &weak, &strong, 8).unwrap();
        prop_assert!(b.conditions_ok);
        prop_assert!(b.value <= yt.yield_at(1, 1) + 1e-12, "{} > {}", b.value, yt.yield_at(1, 1));
    }

    #[test]
    fn inflating_the_vacuum_gain_never_raises_the_bound(extra in 0.0f64..1e-3, mu_prime in 0.2f64..1.0) {
        let eta = 0.75;
        let weak = pair(DistributionKind::Poisson, (1.0 - eta) * mu_prime, eta, TriggerClass::Triggered);
        let strong = pair(DistributionKind::Poisson, mu_prime, eta, TriggerClass::NonTriggered);
        let yt = YieldTable::from_fn(Basis::Z, 8, |m, n| (1.0 - 0.9f64.powi((m + n) as i32), 0.0));
        let g = observed(&yt, &[&weak, &strong]);
        let base = y11_lower_bound(&g, Basis::Z, &weak, &strong, 8).unwrap().value;

        let mut inflated = GainTable::new();
        for r in g.records() {
            let is_weak_vacuum = r.alice_intensity == 0.0 && r.bob_intensity == 0.0 && r.trigger_class == weak.class();
            let gain = if is_weak_vacuum { r.gain + extra } else { r.gain };
            inflated.insert(GainRecord { gain, ..*r }).unwrap();
        }
        let after = y11_lower_bound(&inflated, Basis::Z, &weak, &strong, 8).unwrap().value;
        prop_assert!(after <= base + 1e-15);
    }

    #[test]
    fn symmetric_boundary_is_sharp(eta in 0.01f64..0.99, mu_prime in 0.01f64..1.5, eps in 1e-9f64..0.1) {
        let mu = (1.0 - eta) * mu_prime;
        prop_assert!(symmetric_condition(mu, mu_prime, eta));
        prop_assert!(!symmetric_condition(mu - eps * mu, mu_prime, eta));
    }
}

#[test]
fn finite_decoy_never_beats_asymptotic() {
    let link = LinkSpec::default();
    let model = BsmModel::new(&link).unwrap();
    let settings = RateSettings::default();
    let pairs = [
        (ScenarioKind::H1, ScenarioKind::H0),
        (ScenarioKind::H2, ScenarioKind::H0),
        (ScenarioKind::T1, ScenarioKind::T0),
        (ScenarioKind::W1, ScenarioKind::W0),
    ];
    for km in [0.0, 40.0, 120.0, 200.0] {
        let tables = ChannelTables::new(&model, km, link.at_distance(km).unwrap().transmittance());
        for (finite, asymptotic) in pairs {
            for eta in [0.5, 0.75, 0.9] {
                let (f, a) = (Scenario::new(finite, eta).unwrap(), Scenario::new(asymptotic, eta).unwrap());
                for mu_prime in [0.15, 0.3, 0.5, 0.8] {
                    let pf =
                        rate_for_scenario(&f, &tables, f.weak_intensity(mu_prime, 0.1), mu_prime, &settings).unwrap();
                    let pa = rate_for_scenario(&a, &tables, 0.0, mu_prime, &settings).unwrap();
                    assert!(pf.rate <= pa.rate + 1e-12, "{f} vs {a} at {km} km, mu'={mu_prime}");
                    if pf.valid {
                        assert!(pf.y11_bound <= tables.z.yield_at(1, 1) + 1e-12);
                        assert!(pf.e11_bound >= tables.x.error_at(1, 1).unwrap() - 1e-12);
                    }
                }
            }
        }
    }
}

#[test]
fn gains_survive_a_csv_round_trip_through_the_estimator() {
    let link = LinkSpec::default();
    let model = BsmModel::new(&link).unwrap();
    let t = link.at_distance(50.0).unwrap().transmittance();
    let yt = model.yield_table(Basis::Z, t);
    let weak = pair(DistributionKind::Poisson, 0.1, 0.75, TriggerClass::Triggered);
    let strong = pair(DistributionKind::Poisson, 0.4, 0.75, TriggerClass::NonTriggered);
    let g = observed(&yt, &[&weak, &strong]);
    let mut buf = Vec::new();
    g.write_csv(&mut buf).unwrap();
    let back = GainTable::read_csv(buf.as_slice()).unwrap();
    let a = y11_lower_bound(&g, Basis::Z, &weak, &strong, 8).unwrap();
    let b = y11_lower_bound(&back, Basis::Z, &weak, &strong, 8).unwrap();
    assert_eq!(a, b);
}
