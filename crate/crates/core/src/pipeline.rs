//! Point cloud (or explicit complex) to circular coordinates.

use num_bigint::BigInt;

use crate::complex::{build_rips, enclosing_radius, kronecker_pairing, Chain, Cochain, FilteredComplex, Lower, Upper};
use crate::error::{Error, Result};
use crate::finite_field::OddPrime;
use crate::lifting::{lift_closed, LiftOptions, LiftReport, DEFAULT_SNF_CAP};
use crate::persistence::{dual_cycles, persistent_cohomology, select_class, ClassStrategy, Diagram, PersistencePair};
use crate::ring::Integers;
use crate::smoothing::{circular_map, harmonic_smooth, CircularCoords, SmoothedCocycle};
use crate::winding::{reduce_winding, WindingOptions, WindingReport};

/// An error together with the operation that raised it.
#[derive(Debug, thiserror::Error)]
#[error("{operation}: {source}")]
pub struct StageError {
    pub operation: &'static str,
    #[source]
    pub source: Error,
}

trait At<T> {
    fn at(self, operation: &'static str) -> Result<T, StageError>;
}

impl<T> At<T> for Result<T> {
    fn at(self, operation: &'static str) -> Result<T, StageError> {
        self.map_err(|source| StageError { operation, source })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Threshold {
    /// The enclosing radius, past which the Rips complex is contractible.
    Auto,
    Value(f64),
}

impl std::str::FromStr for Threshold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(Threshold::Auto);
        }
        s.parse().map(Threshold::Value).map_err(|_| Error::Format(format!("bad threshold {s:?}")))
    }
}

/// Where in the selected interval the representative is taken.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScalePolicy {
    /// Interval midpoint, or the largest filtration value for essential classes.
    Midpoint,
    Value(f64),
}

impl std::str::FromStr for ScalePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "midpoint" {
            return Ok(ScalePolicy::Midpoint);
        }
        s.parse().map(ScalePolicy::Value).map_err(|_| Error::Format(format!("bad scale {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub prime: OddPrime,
    /// Highest cohomology degree computed; at least 1.
    pub max_dim: usize,
    pub threshold: Threshold,
    pub class: ClassStrategy,
    pub scale: ScalePolicy,
    pub snf_cap: usize,
    pub seed: u64,
    /// Turn off to keep the lifted representative as is.
    pub reduce_winding: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            prime: OddPrime::new(47).expect("47 is prime"),
            max_dim: 1,
            threshold: Threshold::Auto,
            class: ClassStrategy::MaxPersistence,
            scale: ScalePolicy::Midpoint,
            snf_cap: DEFAULT_SNF_CAP,
            seed: 0,
            reduce_winding: true,
        }
    }
}

impl PipelineConfig {
    fn winding_options(&self) -> WindingOptions {
        WindingOptions { snf_cap: self.snf_cap, seed: self.seed, ..WindingOptions::default() }
    }
}

/// The filtered complex built from points, up to dimension `max_dim + 1`.
pub fn rips_for(points: &[Vec<f64>], config: &PipelineConfig) -> Result<FilteredComplex, StageError> {
    let t = match config.threshold {
        Threshold::Auto => enclosing_radius(points),
        Threshold::Value(t) => t,
    };
    build_rips(points, t, config.max_dim.max(1) + 1).at("complex.build_rips")
}

/// Everything up to and including the integer lifts.
#[derive(Clone, Debug)]
pub struct Lifted {
    pub diagram: Diagram,
    pub class: PersistencePair,
    /// Sublevel complex at the representative scale.
    pub complex: FilteredComplex,
    pub cocycle_lift: LiftReport<Upper>,
    pub cycle_lift: LiftReport<Lower>,
}

#[derive(Clone, Debug)]
pub struct Coordinates {
    /// `None` when reduction was switched off.
    pub winding: Option<WindingReport>,
    pub smoothed: SmoothedCocycle,
    pub coords: CircularCoords,
}

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub lifted: Lifted,
    pub coordinates: Coordinates,
}

/// Persistence, class selection, and the cocycle and dual cycle lifts.
pub fn lift_class(complex: &FilteredComplex, config: &PipelineConfig) -> Result<Lifted, StageError> {
    let p = config.prime;
    let max_dim = config.max_dim.max(1);
    if complex.top_dim() < max_dim {
        return Err(Error::DimensionOutOfRange { dim: max_dim, max: complex.top_dim() }).at("persistence.persistent_cohomology");
    }
    let diagram = persistent_cohomology(complex, p, max_dim).at("persistence.persistent_cohomology")?;
    let selected = select_class(&diagram, 1, config.class).at("persistence.select_class")?;
    let class = match config.scale {
        ScalePolicy::Midpoint => selected.clone(),
        ScalePolicy::Value(s) => selected.at_scale(complex, s).at("persistence.select_class")?,
    };
    let options = LiftOptions { snf_cap: config.snf_cap };
    let sub = complex.sublevel(class.scale);
    let cocycle_lift = lift_closed(&sub, &class.cocycle, p, options).at("lifting.lift_closed")?;
    let mut cycle_lift = None;
    for cycle in dual_cycles(complex, p, &class).at("persistence.dual_cycles")? {
        let report = lift_closed(&sub, &cycle, p, options).at("lifting.lift_closed")?;
        let pairing = kronecker_pairing(&Integers, &cocycle_lift.exact_preimage, &report.exact_preimage);
        if pairing.at("complex.kronecker_pairing")? != BigInt::ZERO {
            cycle_lift = Some(report);
            break;
        }
    }
    let cycle_lift = cycle_lift.ok_or(Error::ZeroPairing).at("winding.reduce_winding")?;
    Ok(Lifted { diagram, class, complex: sub, cocycle_lift, cycle_lift })
}

/// Winding reduction (optional), harmonic smoothing and the circle-valued map.
pub fn coordinates_from(
    complex: &FilteredComplex,
    alpha: &Cochain<BigInt>,
    beta: &Chain<BigInt>,
    config: &PipelineConfig,
) -> Result<Coordinates, StageError> {
    let (winding, generator) = if config.reduce_winding {
        let report = reduce_winding(complex, alpha, beta, &config.winding_options()).at("winding.reduce_winding")?;
        let g = report.reduced_cocycle.clone();
        (Some(report), g)
    } else {
        (None, alpha.clone())
    };
    let smoothed = harmonic_smooth(complex, &generator).at("smoothing_coords.harmonic_smooth")?;
    let coords = circular_map(&smoothed, complex, None).at("smoothing_coords.circular_map")?;
    Ok(Coordinates { winding, smoothed, coords })
}

pub fn run_complex(complex: &FilteredComplex, config: &PipelineConfig) -> Result<PipelineOutput, StageError> {
    let lifted = lift_class(complex, config)?;
    let coordinates = coordinates_from(
        &lifted.complex,
        &lifted.cocycle_lift.exact_preimage,
        &lifted.cycle_lift.exact_preimage,
        config,
    )?;
    Ok(PipelineOutput { lifted, coordinates })
}

pub fn run_points(points: &[Vec<f64>], config: &PipelineConfig) -> Result<PipelineOutput, StageError> {
    run_complex(&rips_for(points, config)?, config)
}
