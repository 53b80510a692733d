"""Smoke test for the qutrit extension module.

Build and install first, e.g. `maturin develop -m crates/py/Cargo.toml`.
"""

import math

import qutrit


def main():
    c = qutrit.Circuit([2, 2, 2])
    c.toffoli(0, 1, 2)
    lowered = c.lower("qutrit")
    assert lowered.dims == [2, 3, 2]
    assert len(lowered) == 3 and lowered.depth() == 3
    amps = lowered.simulate([1, 1, 0])
    probs = [abs(a) ** 2 for a in amps]
    assert abs(probs[lowered_index([1, 1, 1], lowered.dims)] - 1.0) < 1e-12
    assert lowered.sample([1, 1, 0], 100, seed=1) == {"111": 100}

    assert qutrit.Circuit.from_json(lowered.to_json()).to_json() == lowered.to_json()
    assert c.lower("cliffordt").t_metrics()[0] == 7

    witness, layout = qutrit.multiplier_witness()
    assert witness.gate_count("toffoli") == 6
    assert layout["result_wires"] == [5, 10, 11, 12]

    adder, layout = qutrit.build_adder(3)
    assert len(layout["a_wires"]) == 3

    profile = qutrit.cost_profile("baseline")
    assert (profile["depth_per_toffoli"], profile["table_gate_count"]) == (7, 25)

    report = qutrit.estimate("sqrt", 4)
    assert report["cnot_count_ternary"] == 48.0 and report["t_depth"] == 0.0
    assert qutrit.benchmark("qutrit")["overall_depth"] == 162e6

    params = qutrit.NoiseParams(p1=1e-4, p2=1e-2, tau_gate=0.0)
    q = dict(qutrit.success_curve("qutrit", 30, params))
    b = dict(qutrit.success_curve("baseline", 30, params))
    assert abs(q[30] - 0.4047) < 1e-4 and abs(b[30] - 0.00786) < 1e-4
    assert qutrit.p_success(0, 0, 0, 0, qutrit.NoiseParams(p1=0.0, p2=0.0)) == 1.0

    assert abs(qutrit.trunc_error_bound(1, 1, 5.0) - 2 * math.exp(-12.5)) < 1e-15
    assert abs(qutrit.disc_error(1.0, 0.0, 2.0, 4) - 8 / 6144) < 1e-15
    amps = qutrit.gaussian_target_state(6)
    assert abs(sum(a * a for a in amps) - 1.0) < 1e-12
    assert qutrit.rescale_payoff(0.25, 10.0, 50.0) == 20.0

    assert all(check["passed"] for check in qutrit.verify())

    try:
        qutrit.Circuit([2, 4])
    except ValueError:
        pass
    else:
        raise AssertionError("dimension 4 accepted")
    print("smoke test passed")


def lowered_index(digits, dims):
    index = 0
    for d, dim in zip(digits, dims):
        index = index * dim + d
    return index


if __name__ == "__main__":
    main()
