use super::*;

fn cfg() -> OracleConfig {
    OracleConfig::default()
}

fn preset(name: &str) -> Preset {
    find_preset(name, &DEFAULT_DETUNINGS).unwrap()
}

#[test]
fn ten_named_presets() {
    let presets = builtin_presets();
    let names: Vec<_> = presets.iter().map(|p| p.name.as_str()).collect();
    assert_eq!(names, PRESET_NAMES);
    for p in &presets {
        p.validate().unwrap();
        assert_eq!(p.base.omega0, 1.5e9);
        assert_eq!(p.base.gamma, 1.0);
        assert_eq!(p.base.phi, 0.0);
        assert_eq!(p.base.eta, std::f64::consts::FRAC_PI_2);
    }
}

#[test]
fn preset_parameters() {
    let p = preset("fig2a");
    assert_eq!(
        (p.base.lambda, p.base.beta, p.base.omega_drive),
        (4.0, 0.0, 0.0)
    );
    assert_eq!(p.varied.param, Param::R1);
    assert_eq!(p.varied.values, vec![FRAC_1_SQRT_2, 0.5, 0.0]);
    assert_eq!(preset("fig2b").base.lambda, 0.04);

    let p = preset("fig3b");
    assert_eq!(
        (p.base.lambda, p.base.omega_drive, p.base.r1),
        (4.0, 1.6, 0.5)
    );
    assert_eq!(p.varied.values, vec![0.0, 1e-9, 3e-9]);

    let p = preset("fig4b");
    assert_eq!(
        (p.base.lambda, p.base.omega_drive, p.base.r1),
        (0.1, 4.0, 0.5)
    );
    assert_eq!(p.t_window, TimeWindow::new(0.0, 100.0, 4001));

    let p = preset("fig5d");
    assert_eq!(
        (p.base.omega_drive, p.base.beta, p.base.lambda),
        (4.0, 1e-9, 0.1)
    );
    assert_eq!(p.varied.param, Param::Delta);
    assert_eq!(p.varied.values, DEFAULT_DETUNINGS.to_vec());

    let custom = find_preset("fig5a", &[0.5, 3.0]).unwrap();
    assert_eq!(custom.varied.values, vec![0.5, 3.0]);
    assert!(find_preset("fig6", &DEFAULT_DETUNINGS).is_none());
}

#[test]
fn labels() {
    assert_eq!(format_value(FRAC_1_SQRT_2), "0.7071");
    assert_eq!(format_value(0.5), "0.5");
    assert_eq!(format_value(0.0), "0");
    assert_eq!(format_value(1e-9), "1e-9");
    assert_eq!(format_value(3e-9), "3e-9");
    assert_eq!(format_value(1.6), "1.6");
    assert_eq!(format_value(-2.0), "-2");
    assert_eq!(curve_label(Param::R1, 0.5), "r1=0.5");
    assert_eq!("omega_drive".parse::<Param>().unwrap(), Param::OmegaDrive);
    assert!("omega".parse::<Param>().is_err());
}

#[test]
fn weak_coupling_static_curves() {
    let set = run_preset(&preset("fig2a"), Engine::Analytic, &cfg());
    assert!(set.failures.is_empty());
    let labels: Vec<_> = set.curves.iter().map(|c| c.label.as_str()).collect();
    assert_eq!(labels, ["r1=0.7071", "r1=0.5", "r1=0"]);
    for c in &set.curves {
        assert!((c.concurrence[0] - 1.0).abs() < 1e-12);
        assert!(c
            .concurrence
            .iter()
            .all(|&x| (0.0..=1.0 + 1e-9).contains(&x)));
        assert_eq!(c.trajectory.times, set.times);
    }
    let stationary = (4.0 * 3f64.sqrt() - 6.0) / 16.0;
    let half = set.curve("r1=0.5").unwrap();
    assert!((half.concurrence.last().unwrap() - stationary).abs() < 1e-3);
    let equal = set.curve("r1=0.7071").unwrap();
    assert!(*equal.concurrence.last().unwrap() < 1e-3);

    // one decay channel loses entanglement more slowly than two
    let single = set.curve("r1=0").unwrap();
    for (a, b) in single.concurrence.iter().zip(&equal.concurrence).skip(1) {
        assert!(a > b);
    }
}

#[test]
fn strong_coupling_revives() {
    let set = run_preset(&preset("fig2b"), Engine::Analytic, &cfg());
    for c in &set.curves {
        let revival = max_revival(&c.concurrence);
        assert!(revival >= 1e-3, "{}: {revival}", c.label);
    }
}

fn max_revival(c: &[f64]) -> f64 {
    let mut best: f64 = 0.0;
    let mut running_min = f64::INFINITY;
    for &x in c {
        running_min = running_min.min(x);
        best = best.max(x - running_min);
    }
    best
}

#[test]
fn deterministic_reruns() {
    let p = preset("fig4b");
    let a = run_preset(&p, Engine::Oracle, &cfg());
    let b = run_preset(&p, Engine::Oracle, &cfg());
    assert_eq!(a, b);
}

#[test]
fn engines_agree_on_driven_moving_preset() {
    let cmp = compare_engines(&preset("fig3b"), &cfg());
    assert_eq!(cmp.curves.len(), 3);
    assert!(cmp.max_gap() < 1e-6, "{cmp:?}");
}

#[test]
fn failures_do_not_abort_siblings() {
    let mut p = preset("fig3a");
    p.varied.values = vec![0.0, 2.0, 1e-9];
    let set = run_preset(&p, Engine::Analytic, &cfg());
    assert_eq!(set.curves.len(), 2);
    assert_eq!(set.failures.len(), 1);
    assert_eq!(set.failures[0].label, "beta=2");
    assert!(set.failures[0].reason.contains("0 <= beta < 1"));
}

#[test]
fn late_window_samples_same_dynamics() {
    let p = ModelParams {
        lambda: 0.1,
        omega_drive: 1.6,
        r1: 0.5,
        ..ModelParams::default()
    };
    let full = run_curve(&p, &TimeWindow::new(0.0, 20.0, 21), Engine::Oracle, &cfg()).unwrap();
    let late = run_curve(&p, &TimeWindow::new(10.0, 20.0, 11), Engine::Oracle, &cfg()).unwrap();
    assert_eq!(late.times[0], 10.0);
    for k in 0..11 {
        assert!((late.c1[k] - full.c1[k + 10]).norm() < 1e-9);
    }
}

#[test]
fn window_validation() {
    assert!(TimeWindow::new(1.0, 1.0, 5).validate().is_err());
    assert!(TimeWindow::new(2.0, 1.0, 5).validate().is_err());
    assert!(TimeWindow::new(0.0, 1.0, 0).validate().is_err());
    assert!(TimeWindow::new(-1.0, 1.0, 3).validate().is_err());
    assert!(TimeWindow::new(1.0, 1.0, 1).validate().is_ok());
}

#[test]
fn reducers() {
    let t = [0.0, 1.0, 2.0];
    let c = [1.0, 0.2, 0.6];
    assert_eq!(Reducer::Min.apply(&t, &c), 0.2);
    assert_eq!(Reducer::Final.apply(&t, &c), 0.6);
    assert!((Reducer::TimeAverage.apply(&t, &c) - 0.5).abs() < 1e-15);
}

fn sweep(axes: Vec<SweepAxis>, reduce: Reducer, window: TimeWindow) -> SweepSpec {
    SweepSpec {
        axes,
        reduce,
        t_window: window,
        engine: Engine::Analytic,
    }
}

#[test]
fn single_point_sweep_matches_preset() {
    let p = preset("fig3b");
    let spec = sweep(
        vec![SweepAxis {
            param: Param::Beta,
            values: vec![1e-9],
        }],
        Reducer::TimeAverage,
        p.t_window,
    );
    let table = run_sweep(&spec, &p.base, &cfg()).unwrap();
    assert_eq!(table.rows.len(), 1);
    let set = run_preset(&p, Engine::Analytic, &cfg());
    let curve = set.curve("beta=1e-9").unwrap();
    assert_eq!(
        table.rows[0].value.unwrap(),
        Reducer::TimeAverage.apply(&set.times, &curve.concurrence)
    );
}

#[test]
fn stronger_drive_raises_minimum() {
    let base = ModelParams {
        lambda: 0.1,
        r1: 0.5,
        ..ModelParams::default()
    };
    let spec = sweep(
        vec![SweepAxis {
            param: Param::OmegaDrive,
            values: vec![0.0, 1.6, 4.0],
        }],
        Reducer::Min,
        TimeWindow::new(0.0, 100.0, 4001),
    );
    let rows = run_sweep(&spec, &base, &cfg()).unwrap().rows;
    let mins: Vec<f64> = rows.iter().map(|r| r.value.unwrap()).collect();
    assert!(mins.windows(2).all(|w| w[1] >= w[0]), "{mins:?}");
}

#[test]
fn drive_suppresses_velocity_gap() {
    let gap = |omega: f64| {
        let p = ModelParams {
            omega_drive: omega,
            ..preset("fig3a").base
        };
        let w = TimeWindow::new(0.0, 50.0, 2001);
        let a = run_curve(&p, &w, Engine::Analytic, &cfg()).unwrap();
        let b = run_curve(&Param::Beta.with(&p, 3e-9), &w, Engine::Oracle, &cfg()).unwrap();
        sup_gap(&a.concurrence(), &b.concurrence())
    };
    assert!(gap(1.6) < gap(0.0));
}

#[test]
fn two_axis_sweep_order_and_errors() {
    let spec = sweep(
        vec![
            SweepAxis {
                param: Param::Beta,
                values: vec![0.0, 2.0],
            },
            SweepAxis {
                param: Param::OmegaDrive,
                values: vec![0.0, 1.0, 2.0],
            },
        ],
        Reducer::Final,
        TimeWindow::new(0.0, 5.0, 11),
    );
    let table = run_sweep(&spec, &ModelParams::default(), &cfg()).unwrap();
    let coords: Vec<_> = table.rows.iter().map(|r| r.coords.clone()).collect();
    assert_eq!(
        coords,
        vec![
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, 2.0],
            vec![2.0, 0.0],
            vec![2.0, 1.0],
            vec![2.0, 2.0]
        ]
    );
    assert!(table.rows[..3].iter().all(|r| r.value.is_some()));
    assert!(table.rows[3..]
        .iter()
        .all(|r| r.value.is_none() && r.error.is_some()));
}

#[test]
fn sweep_spec_validation() {
    let w = TimeWindow::new(0.0, 1.0, 3);
    assert!(sweep(vec![], Reducer::Min, w).validate().is_err());
    let axis = SweepAxis {
        param: Param::Beta,
        values: vec![0.0],
    };
    assert!(sweep(vec![axis.clone(), axis.clone()], Reducer::Min, w)
        .validate()
        .is_err());
    let empty = SweepAxis {
        param: Param::R1,
        values: vec![],
    };
    assert!(sweep(vec![empty], Reducer::Min, w).validate().is_err());
}
