use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qutrit_core::noise::{
    amplitude_damping_qubit, amplitude_damping_qutrit, depolarizing_channel, lambda_from_time, p_success, GateCensus,
    KrausChannel, NoiseParams, TRACE_TOL,
};
use qutrit_core::pricing::{disc_error, gaussian_target_state, trunc_error_bound, GaussianSpec, PricingSetup};
use qutrit_core::resources::*;
use qutrit_core::simulator::{circuit_unitary, simulate, CMatrix, DensityMatrix, StateVector};
use qutrit_core::verify::{max_leakage, subspace_equivalence_error};
use qutrit_core::{Circuit, ControlSpec, GateFilter, GateInstance, GateKind, LoweringStrategy};

const QUBIT_KINDS: [GateKind; 7] =
    [GateKind::X, GateKind::H, GateKind::T, GateKind::Tdg, GateKind::S, GateKind::Sdg, GateKind::Z];

/// Raw gate proposals; invalid ones are dropped when appended.
fn raw_gates(max: usize) -> impl Strategy<Value = Vec<(u8, usize, usize, usize, usize)>> {
    prop::collection::vec((0u8..10, 0usize..16, 0usize..16, 0usize..16, 1usize..3), 0..max)
}

fn build(dims: &[usize], raw: &[(u8, usize, usize, usize, usize)]) -> Circuit {
    let n = dims.len();
    let mut c = Circuit::from_dims(dims).unwrap();
    for &(k, w0, w1, w2, v) in raw {
        let (a, b, t) = (w0 % n, w1 % n, w2 % n);
        let gate = match k {
            0..=6 => GateInstance::single(QUBIT_KINDS[k as usize], t),
            7 => GateInstance::controlled(GateKind::X, vec![ControlSpec::on(a, v)], t),
            8 => GateInstance::toffoli(a, b, t),
            _ => GateInstance::controlled(
                if v == 1 { GateKind::XPlus1 } else { GateKind::XMinus1 },
                vec![ControlSpec::on(a, v)],
                t,
            ),
        };
        let _ = c.append(gate);
    }
    c
}

fn qubit_circuit() -> impl Strategy<Value = Circuit> {
    (3usize..=10, raw_gates(24)).prop_map(|(n, raw)| build(&vec![2; n], &raw))
}

/// Qubit circuits with at most four Toffolis.
fn toffoli_circuit() -> impl Strategy<Value = Circuit> {
    qubit_circuit().prop_map(|c| {
        let mut out = Circuit::qubits(c.num_wires()).unwrap();
        let mut toffolis = 0;
        for g in c.gates() {
            if g.kind == GateKind::Toffoli {
                if toffolis == 4 {
                    continue;
                }
                toffolis += 1;
            }
            out.append(g.clone()).unwrap();
        }
        out
    })
}

fn mixed_circuit() -> impl Strategy<Value = Circuit> {
    (prop::collection::vec(2usize..=3, 1..=5), raw_gates(20)).prop_map(|(dims, raw)| build(&dims, &raw))
}

fn toffolis(c: &Circuit) -> usize {
    c.gate_count(Some(GateFilter::Kind(GateKind::Toffoli)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn depth_bounded_by_count(c in mixed_circuit()) {
        prop_assert!(c.depth() <= c.gate_count(None));
        prop_assert_eq!(c.depth() == 0, c.gate_count(None) == 0);
    }

    #[test]
    fn append_is_monotone(c in mixed_circuit(), w in 0usize..5) {
        let mut longer = c.clone();
        if longer.append(GateInstance::single(GateKind::H, w % c.num_wires())).is_ok() {
            prop_assert_eq!(longer.gate_count(None), c.gate_count(None) + 1);
            prop_assert!(longer.depth() >= c.depth());
            prop_assert!(longer.depth() <= c.depth() + 1);
        }
    }

    #[test]
    fn t_depth_bounded_by_t_count(c in qubit_circuit()) {
        let lowered = qutrit_core::lower_toffolis(&c, LoweringStrategy::CliffordTFunctional).unwrap();
        let (count, depth) = lowered.t_metrics().unwrap();
        prop_assert!(depth <= count);
    }

    #[test]
    fn json_round_trip(c in mixed_circuit()) {
        prop_assert_eq!(Circuit::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn simulation_preserves_norm(c in mixed_circuit(), seed in any::<u64>()) {
        let dims = c.dims();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let input: Vec<usize> = dims.iter().map(|&d| rng.gen_range(0..d)).collect();
        let out = simulate(&c, &input).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unitary_is_unitary(c in mixed_circuit()) {
        let u = circuit_unitary(&c).unwrap();
        let n = u.nrows();
        let err = (u.adjoint() * &u - CMatrix::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn qutrit_lowering_is_equivalent(c in toffoli_circuit()) {
        let lowered = qutrit_core::lower_toffolis(&c, LoweringStrategy::Qutrit).unwrap();
        prop_assert!(subspace_equivalence_error(&c, &lowered).unwrap() < 1e-10);
        prop_assert_eq!(max_leakage(&lowered).unwrap(), 0.0);
    }

    #[test]
    fn clifford_t_lowering_is_equivalent(c in toffoli_circuit()) {
        let lowered = qutrit_core::lower_toffolis(&c, LoweringStrategy::CliffordTFunctional).unwrap();
        prop_assert!(subspace_equivalence_error(&c, &lowered).unwrap() < 1e-10);
    }
}

proptest! {
    #[test]
    fn lowering_count_law(c in qubit_circuit()) {
        let t = toffolis(&c);
        let q = qutrit_core::lower_toffolis(&c, LoweringStrategy::Qutrit).unwrap();
        prop_assert_eq!(q.gate_count(None), c.gate_count(None) + 2 * t);
        prop_assert_eq!(toffolis(&q), 0);
        prop_assert!(q.depth() <= 3 * c.depth());
        let ct = qutrit_core::lower_toffolis(&c, LoweringStrategy::CliffordTFunctional).unwrap();
        prop_assert_eq!(ct.gate_count(None), c.gate_count(None) + 14 * t);
        prop_assert_eq!(ct.has_qutrits(), false);
    }

    #[test]
    fn three_times_law(n in 2u64..200, p_frac in 0.0f64..=1.0, k in 1u64..6, m in 1u64..64, d in 1u64..6) {
        let p = (p_frac * n as f64).floor() as u64;
        let params = ApproxParams { k, m, d, z: 1 };
        prop_assert_eq!(cnot_count_mul(n, p).unwrap(), 3.0 * toffoli_count_mul(n, p).unwrap());
        prop_assert_eq!(cnot_count_sq(n).unwrap(), 3.0 * toffoli_count_sq(n).unwrap());
        prop_assert_eq!(cnot_count_exp(n, p, &params).unwrap(), 3.0 * toffoli_count_exp(n, p, &params).unwrap());
        prop_assert_eq!(
            cnot_count_add_with(n, LogMode::Floored).unwrap(),
            3.0 * toffoli_count_add_with(n, LogMode::Floored).unwrap()
        );
        let (c, t) = (cnot_count_add(n).unwrap(), toffoli_count_add(n).unwrap());
        prop_assert!((c - 3.0 * t).abs() <= 1e-12 * c.abs().max(1.0));
        prop_assert_eq!(cnot_count_sub(n).unwrap(), cnot_count_add(n).unwrap());
        prop_assert_eq!(toffoli_count_div(n, p).unwrap(), toffoli_count_mul(n, p).unwrap());
        let gap = 3.0 * toffoli_count_arcsq(n, p, &params).unwrap() - cnot_count_arcsq(n, p, &params).unwrap();
        prop_assert_eq!(gap, 20.0);
    }

    #[test]
    fn counts_monotone_in_n(n in 4u64..300, p in 0u64..4, k in 1u64..4, m in 1u64..16) {
        let params = ApproxParams { k, m, d: k, z: 1 };
        prop_assert!(toffoli_count_add(n + 1).unwrap() >= toffoli_count_add(n).unwrap());
        prop_assert!(toffoli_count_mul(n + 1, p).unwrap() >= toffoli_count_mul(n, p).unwrap());
        prop_assert!(toffoli_count_sq(n + 1).unwrap() >= toffoli_count_sq(n).unwrap());
        prop_assert!(toffoli_count_exp(n + 1, p, &params).unwrap() >= toffoli_count_exp(n, p, &params).unwrap());
        prop_assert!(toffoli_count_arcsq(n + 1, p, &params).unwrap() >= toffoli_count_arcsq(n, p, &params).unwrap());
        prop_assert!(cnot_count_add(n + 1).unwrap() >= cnot_count_add(n).unwrap());
        prop_assert!(cnot_count_arcsq(n + 1, p, &params).unwrap() >= cnot_count_arcsq(n, p, &params).unwrap());
        prop_assert!(t_depth_add(n + 1).unwrap() >= t_depth_add(n).unwrap());
    }

    #[test]
    fn mul_depth_without_parallelism(n in 2u64..500) {
        prop_assert_eq!(t_depth_mul(n, 1).unwrap(), n as f64 * (t_depth_add(n).unwrap() + 6) as f64);
    }

    #[test]
    fn fixed_point_round_trip(n in 1u32..32, p_frac in 0.0f64..=1.0, bits in any::<u64>()) {
        let p = (p_frac * n as f64).floor() as u32;
        let f = FixedPointFormat::new(n, p).unwrap();
        let b = bits & ((1u64 << n) - 1);
        prop_assert_eq!(f.encode(f.decode(b)).unwrap(), b);
    }

    #[test]
    fn success_is_monotone(
        one in 0u64..500, two in 0u64..500, qutrit in 0u64..500, depth in 0u64..500,
        p1 in 1e-6f64..1e-2, p2 in 1e-6f64..5e-2, tau in 1e-3f64..1.0,
    ) {
        let census = GateCensus { one_qubit_gates: one, two_qubit_gates: two, two_qutrit_gates: qutrit, depth };
        let params = NoiseParams { p1, p2, tau_gate: tau, ..NoiseParams::default() };
        let base = p_success(&census, &params);
        prop_assert!((0.0..=1.0).contains(&base));
        let worse = [
            NoiseParams { p1: p1 * 1.5, ..params },
            NoiseParams { p2: p2 * 1.5, ..params },
            NoiseParams { tau_gate: tau * 1.5, ..params },
        ];
        for (w, active) in worse.iter().zip([one > 0, two + qutrit > 0, depth > 0]) {
            let p = p_success(&census, w);
            if active { prop_assert!(p < base) } else { prop_assert_eq!(p, base) }
        }
        let more = p_success(&GateCensus { one_qubit_gates: one + 1, ..census }, &params);
        prop_assert!(more < base);
        let deeper = p_success(&GateCensus { depth: depth + 1, ..census }, &params);
        prop_assert!(deeper < base);
    }

    #[test]
    fn channels_are_trace_preserving(d1 in 2usize..=3, d2 in 2usize..=3, p in 0.0f64..0.01, t in 0.0f64..200.0) {
        let ch = depolarizing_channel(&[d1, d2], p).unwrap();
        prop_assert!(trace_defect(&ch) < TRACE_TOL);
        prop_assert!((ch.identity_weight() - (1.0 - ((d1 * d1 * d2 * d2) as f64 - 1.0) * p)).abs() < 1e-14);
        let l1 = lambda_from_time(t, 100.0);
        let l2 = lambda_from_time(t, 30.0);
        prop_assert!(trace_defect(&amplitude_damping_qubit(l1).unwrap()) < TRACE_TOL);
        prop_assert!(trace_defect(&amplitude_damping_qutrit(l1, l2).unwrap()) < TRACE_TOL);
    }

    #[test]
    fn truncation_bound_shape(d in 1u32..10, t_steps in 1u32..30, w in 0.0f64..8.0) {
        let s = PricingSetup { d, t_steps, w, ..Default::default() };
        let e = trunc_error_bound(&s).unwrap();
        let wider = trunc_error_bound(&PricingSetup { w: w + 0.1, ..s }).unwrap();
        prop_assert!(wider < e);
        let doubled = trunc_error_bound(&PricingSetup { d: 2 * d, ..s }).unwrap();
        prop_assert!((doubled - 2.0 * e).abs() <= 1e-15 * doubled);
    }

    #[test]
    fn discretization_ratio(n in 1u32..20, width in 0.1f64..3.0, beta in 0.1f64..5.0) {
        let s = PricingSetup { n, beta, b_lower: 0.0, b_upper: width, ..Default::default() };
        let ratio = disc_error(&s).unwrap() / disc_error(&PricingSetup { n: n + 1, ..s }).unwrap();
        prop_assert!((ratio - 4.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_state_shape(n in 1u32..=10, sigma in 0.1f64..5.0, w in 1.0f64..6.0) {
        let spec = GaussianSpec { n, x0: 0.0, sigma, w };
        let state = gaussian_target_state(&spec).unwrap();
        prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
        let a = state.amplitudes();
        for j in 1..a.len() {
            prop_assert_eq!(a[j], a[a.len() - j]);
        }
    }
}

fn trace_defect(ch: &KrausChannel) -> f64 {
    let d = ch.dimension();
    let sum = ch.operators().iter().fold(CMatrix::zeros(d, d), |acc, k| acc + k.adjoint() * k);
    (sum - CMatrix::identity(d, d)).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn random_channel_sequence_stays_physical() {
    let dims = [2, 3, 2];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut circuit = Circuit::from_dims(&dims).unwrap();
    circuit.append(GateInstance::single(GateKind::H, 0)).unwrap();
    let start = simulate(&circuit, &[0, 1, 0]).unwrap();
    let mut rho = DensityMatrix::from_state(&start).unwrap();
    let gates = [
        GateInstance::single(GateKind::H, 2),
        GateInstance::cx(0, 2),
        GateInstance::controlled(GateKind::XPlus1, vec![ControlSpec::on(0, 1)], 1),
        GateInstance::controlled(GateKind::X, vec![ControlSpec::on(1, 2)], 2),
        GateInstance::single(GateKind::T, 0),
    ];
    for _ in 0..100 {
        match rng.gen_range(0..4) {
            0 => rho.apply_gate(&gates[rng.gen_range(0..gates.len())]).unwrap(),
            1 => {
                let w = rng.gen_range(0..3);
                let ch = if dims[w] == 3 {
                    amplitude_damping_qutrit(rng.gen_range(0.0..0.3), rng.gen_range(0.0..0.3)).unwrap()
                } else {
                    amplitude_damping_qubit(rng.gen_range(0.0..0.3)).unwrap()
                };
                rho.apply_channel(&ch, &[w]).unwrap();
            }
            2 => {
                let w = rng.gen_range(0..3);
                rho.apply_channel(&depolarizing_channel(&[dims[w]], rng.gen_range(0.0..0.05)).unwrap(), &[w]).unwrap();
            }
            _ => {
                let (a, b) = if rng.gen_bool(0.5) { (0, 1) } else { (1, 2) };
                let ch = depolarizing_channel(&[dims[a], dims[b]], rng.gen_range(0.0..0.01)).unwrap();
                rho.apply_channel(&ch, &[a, b]).unwrap();
            }
        }
        assert!((rho.trace().re - 1.0).abs() < 1e-10 && rho.trace().im.abs() < 1e-10);
        assert!(rho.hermiticity_error() < 1e-10);
        assert!(rho.min_eigenvalue() > -1e-10);
    }
}

#[test]
fn pure_state_density_round_trip() {
    let s = StateVector::basis(&[3, 2], &[2, 1]).unwrap();
    let rho = DensityMatrix::from_state(&s).unwrap();
    assert!((rho.fidelity_with(&s) - 1.0).abs() < 1e-12);
}
