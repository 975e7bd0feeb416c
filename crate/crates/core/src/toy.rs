//! Two-mode toy model with a single field component, one polarization and a
//! tunable spatial overlap `ε` between the two cavity modes.

use std::f64::consts::TAU;

use crate::coupling::CouplingSet;
use crate::error::{invalid, Result};
use crate::params::PhysParams;
use crate::profile::{
    toy_mode_fourier, toy_mode_profile, ModeProfile, TOY_FREQUENCIES_HZ, TOY_QUALITY,
};

/// Builder for the toy model's profiles and coupling sets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToyModel {
    pub eps: f64,
    /// Bare angular frequencies of modes 1 and 2 [rad/s].
    pub omega: [f64; 2],
    pub quality: [f64; 2],
    /// Samples per axis of the gridded variant.
    pub grid_n: usize,
}

impl ToyModel {
    /// Toy model at overlap `eps` with the default frequencies 0.339 and
    /// 0.384 THz and quality factors 72 and 70.
    pub fn new(eps: f64) -> Self {
        Self {
            eps,
            omega: TOY_FREQUENCIES_HZ.map(|f| TAU * f),
            quality: TOY_QUALITY,
            grid_n: 128,
        }
    }

    pub fn with_frequencies(mut self, omega1: f64, omega2: f64) -> Self {
        self.omega = [omega1, omega2];
        self
    }

    pub fn with_quality(mut self, q1: f64, q2: f64) -> Self {
        self.quality = [q1, q2];
        self
    }

    pub fn with_grid(mut self, grid_n: usize) -> Self {
        self.grid_n = grid_n;
        self
    }

    fn check(&self) -> Result<()> {
        for (i, w) in self.omega.iter().enumerate() {
            if !(*w > 0.0) || !w.is_finite() {
                return Err(invalid("omega", format!("mode {} frequency {w} must be positive", i + 1)));
            }
        }
        for q in self.quality {
            if !(q > 0.0) {
                return Err(invalid("quality", format!("{q} must be positive")));
            }
        }
        Ok(())
    }

    fn finish(&self, p: usize, prof: ModeProfile) -> ModeProfile {
        prof.with_frequency(self.omega[p - 1])
            .with_quality(self.quality[p - 1])
    }

    /// Exact four-term Fourier profiles of both modes.
    pub fn profiles(&self) -> Result<Vec<ModeProfile>> {
        self.check()?;
        (1..=2)
            .map(|p| Ok(self.finish(p, toy_mode_fourier(p, self.eps)?)))
            .collect()
    }

    /// Profiles sampled on a `grid_n × grid_n` grid.
    pub fn grid_profiles(&self) -> Result<Vec<ModeProfile>> {
        self.check()?;
        (1..=2)
            .map(|p| Ok(self.finish(p, toy_mode_profile(p, self.eps, self.grid_n)?)))
            .collect()
    }

    /// Coupling set at field `b` [T] from the Fourier profiles.
    pub fn coupling_set(&self, params: &PhysParams, b: f64) -> Result<CouplingSet> {
        CouplingSet::from_profiles(&self.profiles()?, params, b)
    }

    pub fn grid_coupling_set(&self, params: &PhysParams, b: f64) -> Result<CouplingSet> {
        CouplingSet::from_profiles(&self.grid_profiles()?, params, b)
    }
}
