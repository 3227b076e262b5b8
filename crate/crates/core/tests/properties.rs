use proptest::prelude::*;

use noblespin::gaussian::{
    db_to_variance, epr_criterion, feedback, feedback_variance, lossy_channel, minimal_variance, optimal_gain,
    squeezing_parameter, variance_to_db, GaussianSector, Sector, PB, VACUUM,
};
use noblespin::io::csv::fmt_f64;
use noblespin::io::{config_digest, parse_config_str, to_normalized_toml};
use noblespin::params::{
    field_matching, precession_frequencies, BufferGas, CellIndex, CellSpec, Drive, FieldSpec, ProbeSpec, PumpDrive,
    PumpSpec, RateSpec,
};
use noblespin::{derive, AlkaliName, ChannelSpec, DeriveOptions, NobleName, PhysicalConfig};

fn spec() -> impl Strategy<Value = ChannelSpec> {
    (0.0..8.0f64, 0.0..0.95f64, 0.0..1.0f64, 0.0..3.0f64).prop_map(|(kappa, epsilon, eta, rho)| ChannelSpec {
        kappa,
        epsilon,
        eta,
        rho,
    })
}

fn pair() -> impl Strategy<Value = (AlkaliName, NobleName)> {
    prop_oneof![
        Just((AlkaliName::K, NobleName::He3)),
        Just((AlkaliName::Rb87, NobleName::Xe129)),
    ]
}

fn any_config() -> impl Strategy<Value = PhysicalConfig> {
    let cell = (
        pair(),
        0.1..20.0f64,
        0.001..4.0f64,
        300.0..700.0f64,
        250.0..320.0f64,
        1.0..5000.0f64,
        0.0..=1.0f64,
        proptest::option::of(1e10..1e16f64),
        proptest::collection::vec((prop_oneof![Just("N2"), Just("He4")], 0.0..800.0f64), 0..3),
    );
    let probe = (1e-4..2.0f64, -1e13..1e13f64, 1e9..1e12f64, 1e-3..2.0f64);
    let pump = (
        prop_oneof![
            (1.0..1e5f64).prop_map(PumpDrive::Rate),
            (0.01..0.99f64).prop_map(PumpDrive::Polarization)
        ],
        -1e5..1e5f64,
        1.0..6.0f64,
    );
    let rest = (1.0..1e4f64, 1e-7..1e-2f64, 1e-4..1.0f64, proptest::option::of(-1e4..1e4f64));
    (cell, probe, pump, rest).prop_map(|(c, p, pm, r)| PhysicalConfig {
        cell: CellSpec {
            alkali: c.0 .0,
            noble: c.0 .1,
            length: c.1,
            area: c.2,
            temperature: c.3,
            fill_temperature: c.4,
            noble_pressure: c.5,
            noble_polarization: c.6,
            alkali_density: c.7,
            buffer_gases: c
                .8
                .into_iter()
                .map(|(name, pressure)| BufferGas {
                    name: name.into(),
                    pressure,
                })
                .collect(),
        },
        probe: ProbeSpec {
            power: p.0,
            detuning: p.1,
            linewidth: p.2,
            pulse_duration: p.3,
        },
        pump: PumpSpec {
            drive: pm.0,
            light_shift: pm.1,
            q_factor: pm.2,
        },
        rates: RateSpec {
            spin_destruction: r.0,
            noble_relaxation: r.1,
        },
        field: FieldSpec {
            bias: r.2,
            detuning_override: r.3,
        },
    })
}

fn headline() -> PhysicalConfig {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/he3_k_headline.toml");
    noblespin::io::parse_config(path).unwrap()
}

/// Headline cell with the main knobs varied over a physically sensible range.
fn near_headline() -> impl Strategy<Value = PhysicalConfig> {
    (
        480.0..560.0f64,
        0.05..1.5f64,
        1.5e12..8e12f64,
        0.05..0.5f64,
        300.0..2500.0f64,
        0.2..0.9f64,
    )
        .prop_map(|(t, power, det, pulse, pressure, pol)| {
            let mut c = headline();
            c.cell.temperature = t;
            c.probe.power = power;
            c.probe.detuning = det;
            c.probe.pulse_duration = pulse;
            c.cell.noble_pressure = pressure;
            c.cell.noble_polarization = pol;
            c
        })
}

const RELAXED: DeriveOptions = DeriveOptions {
    allow_regime_violation: true,
    electron_radius: noblespin::ElectronRadius::Physical,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn config_round_trip(cfg in any_config()) {
        prop_assume!(cfg.validate().is_ok());
        let text = to_normalized_toml(&cfg);
        let back = parse_config_str(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(to_normalized_toml(&back), text);
        prop_assert_eq!(config_digest(&back), config_digest(&cfg));
    }

    #[test]
    fn csv_floats_round_trip(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        prop_assume!(x.is_finite());
        prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn derived_parameters_are_physical(cfg in near_headline()) {
        let Ok(p) = derive(&cfg, RELAXED) else { return Ok(()) };
        prop_assert!(p.kappa > 0.0);
        prop_assert!((0.0..1.0).contains(&p.epsilon));
        prop_assert!((0.0..=1.0).contains(&p.eta));
        prop_assert!(p.rho > 0.0 && p.big_gamma_b >= p.gamma_b && p.optical_depth > 0.0);
        let k = p.j * p.q.abs() * p.pulse_duration / (p.detuning.powi(2) + p.gamma_a.powi(2)).sqrt();
        prop_assert!((p.kappa / k - 1.0).abs() < 1e-12);
        prop_assert!((p.eta - 2.0 * p.big_gamma_b * p.pulse_duration).abs() <= 1e-12 * p.eta);
        let c = p.channel_spec();
        prop_assert!(c.validate().is_ok());
    }

    #[test]
    fn kappa_grows_with_probe_power(cfg in near_headline(), factor in 1.1..4.0f64) {
        let Ok(a) = derive(&cfg, RELAXED) else { return Ok(()) };
        let mut more = cfg.clone();
        more.probe.power *= factor;
        let Ok(b) = derive(&more, RELAXED) else { return Ok(()) };
        prop_assert!(b.kappa > a.kappa);
    }

    #[test]
    fn light_loss_grows_with_alkali_density(cfg in near_headline(), n in 1e13..1e15f64, factor in 1.1..3.0f64) {
        let mut lo = cfg.clone();
        lo.cell.alkali_density = Some(n);
        let mut hi = cfg;
        hi.cell.alkali_density = Some(n * factor);
        let (Ok(a), Ok(b)) = (derive(&lo, RELAXED), derive(&hi, RELAXED)) else { return Ok(()) };
        prop_assert!(b.epsilon > a.epsilon);
    }

    #[test]
    fn matched_field_equalizes_precession(
        g_a in 1e5..1e7f64,
        g_b in 1e3..3e4f64,
        b1 in 1e-3..0.1f64,
        j in 1.0..1e4f64,
        m_a in 1e12..1e16f64,
        m_b in 1e16..1e20f64,
        shift in -1e5..1e5f64,
    ) {
        let fm = field_matching(g_a, g_b, b1, j, m_a, m_b);
        let one = precession_frequencies(&Drive { g_a, g_b, field: b1, light_shift: shift }, j, m_a, m_b, CellIndex::First);
        let two = precession_frequencies(
            &Drive { g_a, g_b, field: fm.b2, light_shift: shift + fm.light_shift_difference },
            j, m_a, m_b, CellIndex::Second,
        );
        let scale_a = one.omega_a.abs().max(g_a * b1);
        let scale_b = one.omega_b.abs().max(g_b * b1);
        prop_assert!((one.omega_a - two.omega_a).abs() <= 1e-12 * scale_a);
        prop_assert!((one.omega_b - two.omega_b).abs() <= 1e-12 * scale_b);
    }

    #[test]
    fn squeezing_monotone(s in spec(), d in 0.0..0.5f64) {
        let xi = squeezing_parameter(&s).xi;
        prop_assert!(xi >= 0.0);
        let more_kappa = ChannelSpec { kappa: s.kappa + d, ..s };
        prop_assert!(squeezing_parameter(&more_kappa).xi >= xi - 1e-14);
        let lossier = ChannelSpec { epsilon: (s.epsilon + d).min(0.99), ..s };
        prop_assert!(squeezing_parameter(&lossier).xi <= xi + 1e-14);
        let decayed = ChannelSpec { eta: (s.eta + d).min(1.0), ..s };
        prop_assert!(squeezing_parameter(&decayed).xi <= xi + 1e-14);
        let noisier = ChannelSpec { rho: s.rho + d, ..s };
        prop_assert!(squeezing_parameter(&noisier).xi <= xi + 1e-14);
    }

    #[test]
    fn channel_output_is_physical(s in spec()) {
        let out = lossy_channel(&s).apply(&GaussianSector::vacuum(Sector::Y));
        prop_assert!(out.is_physical(1e-10));
        let fb = feedback(&out, optimal_gain(&s));
        prop_assert!(fb.is_physical(1e-10));
        prop_assert!((fb.variance(PB) - minimal_variance(&s)).abs() < 1e-12);
        prop_assert!(fb.variance(PB) <= VACUUM + 1e-15);
    }

    #[test]
    fn optimal_gain_beats_any_other(s in spec(), g in -5.0..5.0f64) {
        let out = lossy_channel(&s).apply(&GaussianSector::vacuum(Sector::Y));
        prop_assert!(feedback_variance(&out, g) >= minimal_variance(&s) - 1e-12);
    }

    #[test]
    fn epr_value_matches_both_sectors(s in spec()) {
        let g = optimal_gain(&s);
        let y = feedback(&lossy_channel(&s).apply(&GaussianSector::vacuum(Sector::Y)), g);
        let z = feedback(&lossy_channel(&s).apply(&GaussianSector::vacuum(Sector::Z)), g);
        let (value, entangled) = epr_criterion(&y, &z);
        let r = squeezing_parameter(&s);
        prop_assert!((value - r.epr_value).abs() < 1e-12);
        prop_assert_eq!(entangled, r.entangled);
    }

    #[test]
    fn db_conversion_inverts(db in -20.0..30.0f64) {
        prop_assert!((variance_to_db(db_to_variance(db)) - db).abs() < 1e-12);
    }
}
