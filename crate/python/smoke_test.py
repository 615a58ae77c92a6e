"""Smoke test for the pyfrogleap extension module.

Build and install it first, e.g. `maturin develop -m crates/python/Cargo.toml`
or copy `target/release/libpyfrogleap.so` to `pyfrogleap.so` on PYTHONPATH.
"""

import math

import pyfrogleap as fl


def main():
    assert fl.decode_power(0) == 0.1
    assert fl.decode_power(93) == 2.4808
    assert fl.decode_modulation(1) == "BPSK"
    assert fl.decode_modulation(5) == "16QAM"
    assert fl.q_approx(0.0) == 0.5
    assert math.isclose(fl.q_approx(1.0), 0.1592801702485695, rel_tol=1e-12)
    assert fl.ber(2, 10.0) < fl.ber(2, 1.0)
    assert fl.mode_weights("multimedia") == (0.80, 0.05, 0.15)

    try:
        fl.decode_power(94)
    except ValueError:
        pass
    else:
        raise AssertionError("power code 94 accepted")

    env = fl.Environment.sample(8, seed=1)
    assert len(env) == 8
    assert all(0.0 <= a <= 1.0 for a in env.attenuation_db)

    plan = fl.Plan([(93, 11)] * 8)
    scores = fl.fitness(plan, env, "multimedia")
    assert 0.0 <= scores["fitness"] <= 1.0

    a = fl.run_sfla(env, "multimedia", generations=100, seed=3)
    b = fl.run_sfla(env, "multimedia", generations=100, seed=3)
    assert a.best_fitness == b.best_fitness
    assert a.final_fitness >= a.initial_fitness
    assert all(y >= x for x, y in zip(a.best_fitness, a.best_fitness[1:]))
    assert len(a.best_codes) == 8

    ga = fl.run_ga(env, "multimedia", population_size=50, generations=100, seed=3)
    assert ga.final_fitness >= ga.initial_fitness

    single = fl.Environment([0.5])
    best_plan, best = fl.oracle(single, "urgence")
    assert best_plan.codes == [(62, 3)]
    assert math.isclose(best["fitness"], 0.6832916044974993, rel_tol=1e-12)
    sfla = fl.run_sfla(single, "urgence", generations=200)
    assert sfla.final_fitness <= best["fitness"]

    csv = fl.run_config(
        "experiment = timing\nmodes = urgence\nn = 4\nF = 10\nm = 2\ngenerations = 5\nseeds = 1..2\n"
    )
    lines = csv.strip().splitlines()
    assert lines[0].startswith("experiment,mode,n,F,m")
    assert len(lines) == 3

    print("pyfrogleap smoke test passed:", a)


if __name__ == "__main__":
    main()
