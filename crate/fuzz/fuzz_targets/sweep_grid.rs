#![no_main]

use arbitrary::Arbitrary;
use libfuzzer_sys::fuzz_target;
use priorent_cli::{Spacing, SweepRequest, SweepVariable};

#[derive(Debug, Arbitrary)]
struct Input {
    temperature: bool,
    log: bool,
    start: f64,
    stop: f64,
    points: u16,
}

fuzz_target!(|input: Input| {
    let variable = if input.temperature {
        SweepVariable::Temperature
    } else {
        SweepVariable::Beta
    };
    let spacing = if input.log {
        Spacing::Log
    } else {
        Spacing::Linear
    };
    let Ok(request) = SweepRequest::new(
        variable,
        input.start,
        input.stop,
        input.points as usize,
        spacing,
    ) else {
        return;
    };
    let grid = request.grid();
    assert_eq!(grid.len(), request.points);
    assert_eq!(grid[0], request.start);
    assert_eq!(*grid.last().unwrap(), request.stop);
    assert!(grid
        .iter()
        .all(|&x| x.is_finite() && x >= request.start && x <= request.stop));
    let betas = request.betas(1.0);
    assert!(betas.iter().all(|b| !b.is_nan()));
});
