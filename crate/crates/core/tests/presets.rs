use dqd_core::sweep::{default_coupling_grid, DEFAULT_DETECTOR_TEMPERATURES};
use dqd_core::{
    disconnected_distribution, figure_preset, phi_mi, run_sweep, standard_mutual_information,
    Binding, Disconnection, Divergence, Figure, Param, SweepSpec, SystemParams,
};

/// Caption constants shared by every figure.
fn assert_shared(p: &SystemParams) {
    assert_eq!(p.eps_x, 1.0);
    assert_eq!(p.eps_y, 1.0);
    assert_eq!(p.t_s, 1.0);
    assert_eq!(p.gamma_d, 100.0);
    assert_eq!(p.gamma_h1, 0.1);
    assert_eq!(p.gamma_l0, 0.1);
}

#[test]
fn preset_constants_match_captions() {
    for figure in [Figure::Fig3a, Figure::Fig3b] {
        let family = figure_preset(figure);
        let temps: Vec<f64> = family.iter().map(|m| m.spec.base.t_d).collect();
        assert_eq!(temps, DEFAULT_DETECTOR_TEMPERATURES);
        for m in &family {
            let p = m.spec.base;
            assert_shared(&p);
            assert_eq!((p.mu_h, p.mu_l), (1.1, 0.9));
            assert_eq!((p.gamma_h0, p.gamma_l1), (10.0, 10.0));
            let sign = if figure == Figure::Fig3a { -1.0 } else { 1.0 };
            assert_eq!(m.spec.bindings, vec![Binding::mu_d_tied(sign)]);
        }
    }

    let fig4: Vec<(f64, f64)> = figure_preset(Figure::Fig4)
        .iter()
        .map(|m| {
            assert_shared(&m.spec.base);
            assert_eq!(m.spec.base.t_d, 0.1);
            (m.spec.base.gamma_h0, m.spec.base.gamma_l1)
        })
        .collect();
    assert_eq!(fig4, vec![(10.0, 10.0), (1.0, 1.0), (0.1, 0.1)]);

    let fig5: Vec<(f64, f64)> = figure_preset(Figure::Fig5)
        .iter()
        .map(|m| {
            assert_shared(&m.spec.base);
            assert_eq!(m.spec.base.t_d, 0.1);
            assert_eq!((m.spec.base.gamma_h0, m.spec.base.gamma_l1), (10.0, 10.0));
            (m.spec.base.mu_h, m.spec.base.mu_l)
        })
        .collect();
    assert_eq!(fig5, vec![(0.4, 0.2), (1.1, 0.9), (3.1, 2.9)]);

    let fig6 = figure_preset(Figure::Fig6);
    assert_eq!(fig6.len(), 1);
    let p = fig6[0].spec.base;
    assert_shared(&p);
    assert_eq!((p.mu_h, p.mu_l, p.t_d), (3.1, 2.9, 0.1));
    assert_eq!((p.gamma_h0, p.gamma_l1), (10.0, 10.0));

    for figure in Figure::ALL {
        for m in figure_preset(figure) {
            assert_eq!(m.spec.swept, Param::U);
            assert_eq!(m.spec.grid, default_coupling_grid());
            assert_eq!(m.spec.disconnection, Disconnection::Rebind);
        }
    }
}

#[test]
fn tied_potential_resolves_per_record() {
    let spec = figure_preset(Figure::Fig3b).remove(0).spec;
    let records = run_sweep(&spec).unwrap();
    let at_two = records
        .iter()
        .find(|r| (r.swept_value - 2.0).abs() < 1e-12)
        .unwrap();
    assert_eq!(at_two.params.mu_d, 2.0);
    for r in &records {
        assert_eq!(r.params.mu_d, 1.0 + r.swept_value / 2.0);
    }
}

#[test]
fn sweep_order_and_reproducibility() {
    let spec = figure_preset(Figure::Fig5).remove(2).spec;
    let a = run_sweep(&spec).unwrap();
    let b = run_sweep(&spec).unwrap();
    assert_eq!(a.len(), spec.grid.len());
    for (r, g) in a.iter().zip(&spec.grid) {
        assert_eq!(r.swept_value, *g);
    }
    let bits = |rs: &[dqd_core::SweepRecord]| -> Vec<u64> {
        rs.iter()
            .flat_map(|r| r.p.iter().chain(&r.q).chain([&r.phi]).map(|v| v.to_bits()))
            .collect()
    };
    assert_eq!(bits(&a), bits(&b));
}

#[test]
fn fig3b_phi_strictly_increasing() {
    let records = run_sweep(&figure_preset(Figure::Fig3b).remove(0).spec).unwrap();
    assert!(records.windows(2).all(|w| w[1].phi > w[0].phi));
}

#[test]
fn fig6_crossover_on_grid() {
    let records = run_sweep(&figure_preset(Figure::Fig6).remove(0).spec).unwrap();
    let first_over = records
        .iter()
        .find(|r| r.swept_value > 1.0 && r.p[2] > r.p[1])
        .unwrap();
    assert!(
        (first_over.swept_value - 4.0).abs() <= 0.05 + 1e-9,
        "{}",
        first_over.swept_value
    );
}

#[test]
fn near_delta_state_has_no_standard_mi() {
    let r = figure_preset(Figure::Fig3b)
        .remove(0)
        .spec
        .record_at(20.0)
        .unwrap();
    assert!(r.standard_mi < 1e-6);
    let p = dqd_core::StateDistribution::new(r.p).unwrap();
    assert_eq!(standard_mutual_information(&p), r.standard_mi);
}

#[test]
fn phi_is_continuous_at_zero_coupling() {
    for figure in [Figure::Fig3a, Figure::Fig3b] {
        let spec = figure_preset(figure).remove(0).spec;
        assert!(spec.record_at(1e-6).unwrap().phi <= 1e-6);
    }
}

#[test]
fn reference_distribution_is_near_uniform() {
    let q = disconnected_distribution(&SystemParams::reference()).unwrap();
    for v in q.as_array() {
        assert!((v - 0.25).abs() < 0.02);
    }
}

#[test]
fn keep_resolved_semantics_loses_uniform_reference() {
    // The alternative disconnection keeps mu_d = eps_x + u/2 at u = 0; the
    // detector is then nearly always full in the reference device.
    let mut spec = figure_preset(Figure::Fig3b).remove(0).spec;
    spec.disconnection = Disconnection::KeepResolved;
    let r = spec.record_at(2.0).unwrap();
    assert!(r.q[2] + r.q[3] > 0.99);
    assert_eq!(spec.disconnected(2.0).mu_d, 2.0);

    // phi_mi on resolved parameters follows the same semantics
    let direct = phi_mi(&spec.connected(2.0)).unwrap();
    assert_eq!(direct.phi.value(), r.phi);

    // far enough out q(0,0) underflows and the divergence is flagged infinite
    let far = phi_mi(&spec.connected(20.0)).unwrap();
    assert_eq!(far.phi, Divergence::Infinite);
}

#[test]
fn generic_sweep_with_offset_binding() {
    // shift both leads together, keeping mu_h - mu_l = 0.2
    let spec = SweepSpec::new(
        SystemParams::reference().with(Param::U, 2.0),
        Param::MuH,
        vec![0.4, 1.1, 3.1],
    )
    .with_binding("mu_l=mu_h-0.2".parse().unwrap())
    .with_binding(Binding::mu_d_tied(1.0));
    let records = run_sweep(&spec).unwrap();
    for r in &records {
        assert!((r.params.mu_h - r.params.mu_l - 0.2).abs() < 1e-12);
        assert_eq!(r.params.mu_d, 2.0);
    }
    let fig5 = figure_preset(Figure::Fig5);
    for (r, m) in records.iter().zip(&fig5) {
        let preset = m.spec.record_at(2.0).unwrap();
        assert!((r.phi - preset.phi).abs() < 1e-12);
    }
}
