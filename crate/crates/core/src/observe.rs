//! Hooks for watching a solver run.

use crate::descartes::Interval;
use crate::newton::ActiveInterval;

/// How an interval was replaced by a smaller one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadraticKind {
    Boundary,
    Newton,
}

/// Callbacks fired by the tests and the main loops. All methods default to
/// doing nothing.
pub trait Observer {
    fn on_zero_test(&mut self, _interval: &Interval, _no_root: bool) {}

    fn on_one_test(&mut self, _interval: &Interval, _isolated: Option<&Interval>) {}

    fn on_quadratic(&mut self, _parent: &ActiveInterval, _child: &ActiveInterval, _kind: QuadraticKind) {}

    fn on_linear(&mut self, _parent: &ActiveInterval, _children: &[ActiveInterval]) {}
}

/// Observer that ignores everything.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoObserver;

impl Observer for NoObserver {}
