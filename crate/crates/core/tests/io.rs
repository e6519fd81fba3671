use std::f64::consts::PI;
use std::path::Path;

use proptest::prelude::*;
use vk_core::io::{
    analyze_dir, emit_config, format_macro, format_micro, list_snapshots, parse_config, parse_config_with,
    parse_snapshot, read_snapshot, AnalyzeOptions, DirSink, GridSnapshot, ModelConfig, ParseOptions, Snapshot,
    SnapshotKind,
};
use vk_core::macrosim::run_macro;
use vk_core::{Error, MacroInitSpec, MacroParams, MacroState, ParticleEnsemble, RunOptions};

fn ensemble_strategy() -> impl Strategy<Value = ParticleEnsemble> {
    (1usize..40, 0.5f64..100.0).prop_flat_map(|(n, l)| {
        (
            Just(l),
            prop::collection::vec((0.0..l, 0.0..l), n),
            prop::collection::vec(-PI..PI, n),
            prop::collection::vec(-1e6f64..1e6, n),
        )
            .prop_map(|(l, pos, theta, omega)| {
                ParticleEnsemble::new(l, pos.into_iter().map(|(x, y)| [x, y]).collect(), theta, omega).unwrap()
            })
    })
}

fn grid_strategy() -> impl Strategy<Value = GridSnapshot> {
    (1usize..6, 1usize..6, 0.1f64..10.0).prop_flat_map(|(nx, ny, l)| {
        let n = nx * ny;
        (
            Just((nx, ny, l)),
            prop::collection::vec(1e-3f64..1e3, n),
            prop::collection::vec(-50.0f64..50.0, n),
            prop::collection::vec(-PI..PI, n),
            0.0f64..1e4,
        )
            .prop_map(|((nx, ny, length), rho, omega_bar, theta, t)| GridSnapshot {
                t,
                nx,
                ny,
                length,
                rho,
                omega_bar,
                dir: theta.iter().map(|a| [a.cos(), a.sin()]).collect(),
            })
    })
}

proptest! {
    #[test]
    fn particle_snapshots_round_trip(ens in ensemble_strategy(), t in 0.0f64..1e5) {
        let text = format_micro(t, &ens);
        match parse_snapshot(&text).unwrap() {
            Snapshot::Micro(s) => {
                prop_assert_eq!(s.t, t);
                prop_assert_eq!(s.ensemble, ens);
            }
            Snapshot::Macro(_) => prop_assert!(false, "wrong kind"),
        }
    }

    #[test]
    fn grid_snapshots_round_trip(g in grid_strategy()) {
        let text = format_macro(&g);
        prop_assert_eq!(parse_snapshot(&text).unwrap(), Snapshot::Macro(g));
    }

    #[test]
    fn any_flipped_digit_is_detected(ens in ensemble_strategy(), pick in any::<prop::sample::Index>()) {
        let text = format_micro(1.0, &ens);
        let body_end = text.rfind("# checksum=").unwrap();
        let digits: Vec<usize> = text[..body_end]
            .char_indices()
            .filter(|(_, c)| c.is_ascii_digit())
            .map(|(i, _)| i)
            .collect();
        let at = digits[pick.index(digits.len())];
        let mut bytes = text.into_bytes();
        bytes[at] = if bytes[at] == b'7' { b'3' } else { b'7' };
        let corrupt = String::from_utf8(bytes).unwrap();
        prop_assert!(matches!(parse_snapshot(&corrupt), Err(Error::Checksum(_))));
    }
}

#[test]
fn grid_snapshot_reconstructs_state() {
    let s = MacroState::from_fn(5, 3, 2.0, |x, y| (1.0 + x, y - 1.0, x * y));
    let g = GridSnapshot::from_state(0.5, &s);
    let back = g.to_state();
    for c in 0..s.cells() {
        assert!((back.rho[c] - s.rho[c]).abs() < 1e-15);
        assert!((back.m_omega[c] - s.m_omega[c]).abs() < 1e-14);
        assert!((back.m_dir[c][0] - s.m_dir[c][0]).abs() < 1e-14);
        assert!((back.m_dir[c][1] - s.m_dir[c][1]).abs() < 1e-14);
    }
}

#[test]
fn truncated_snapshot_is_rejected() {
    let ens = ParticleEnsemble::new(4.0, vec![[1.0, 1.0], [2.0, 3.0]], vec![0.1, 0.2], vec![0.0, 1.0]).unwrap();
    let text = format_micro(0.0, &ens);
    let cut = &text[..text.len() / 2];
    assert!(parse_snapshot(cut).is_err());
}

fn shipped_config(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn shipped_configs_parse_and_round_trip() {
    for name in ["table1.toml", "macro_sync.toml", "macro_regime.toml"] {
        let text = shipped_config(name);
        let cfg = parse_config_with(&text, ParseOptions { allow_stiff: true }).unwrap_or_else(|e| panic!("{name}: {e}"));
        let again = parse_config_with(&emit_config(&cfg), ParseOptions { allow_stiff: true }).unwrap();
        assert_eq!(cfg, again, "{name}");
    }
}

#[test]
fn table1_needs_the_stiffness_opt_in() {
    let err = parse_config(&shipped_config("table1.toml")).unwrap_err();
    assert!(err.is_config());
    let cfg = parse_config_with(&shipped_config("table1.toml"), ParseOptions { allow_stiff: true }).unwrap();
    match cfg.model {
        ModelConfig::Micro { params, .. } => {
            assert_eq!(params.n, 15_000);
            assert_eq!(params.k_theta, 71.0);
            assert!((2.0 * params.alpha2).sqrt() == 0.5);
        }
        ModelConfig::Macro { .. } => panic!("table1 is a particle run"),
    }
}

#[test]
fn macro_run_written_to_disk_can_be_analyzed() {
    let dir = tempfile::tempdir().unwrap();
    let mut p = MacroParams::new(8.0).unwrap();
    p.nx = 12;
    p.ny = 12;
    p.t_end = 2.0;
    p.dt = 0.01;
    let mut sink = DirSink::create(dir.path()).unwrap();
    let opts = RunOptions {
        snapshot_every: Some(0.5),
        ..Default::default()
    };
    let r = run_macro(&p, &MacroInitSpec::default(), &mut sink, &opts).unwrap();
    let files = list_snapshots(dir.path()).unwrap();
    assert_eq!(files.len(), 5);
    match read_snapshot(files.last().unwrap()).unwrap() {
        Snapshot::Macro(g) => {
            assert_eq!(g.t, r.final_time);
            assert_eq!(g.rho, r.final_state.rho);
        }
        Snapshot::Micro(_) => panic!("expected a grid snapshot"),
    }
    let report = analyze_dir(dir.path(), &AnalyzeOptions::default()).unwrap();
    assert_eq!(report.kind, SnapshotKind::Macro);
    assert_eq!(report.snapshots, 5);
    assert!(!report.series_from_run);
    assert!((report.series.polar_order.last().unwrap() - r.final_polar_order).abs() < 1e-12);
}
