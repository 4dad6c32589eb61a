#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use hedrop::rovib::{state_from_coordinates, RotorVibState};
use proptest::array::{uniform3, uniform5};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

/// Deterministic sampler so every run audits the same states.
pub fn sampler() -> TestRunner {
    TestRunner::new_with_rng(Config::default(), TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn draw<S: Strategy>(runner: &mut TestRunner, s: S) -> S::Value {
    s.new_tree(runner).expect("strategy").current()
}

/// Random state away from the Euler poles with moderate spin and deformation.
pub fn random_state(runner: &mut TestRunner) -> RotorVibState<f64> {
    let angles = draw(runner, (0.0..TAU, 0.3..PI - 0.3, 0.0..TAU));
    let rates = draw(runner, uniform3(-1.0..1.0_f64));
    let q = draw(runner, uniform5(-0.05..0.05_f64));
    let qdot = draw(runner, uniform5(-0.2..0.2_f64));
    let c = [angles.0, angles.1, angles.2, q[0], q[1], q[2], q[3], q[4]];
    let v = [rates[0], rates[1], rates[2], qdot[0], qdot[1], qdot[2], qdot[3], qdot[4]];
    state_from_coordinates(&c, &v)
}
