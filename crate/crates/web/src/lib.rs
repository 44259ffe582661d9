//! wasm-bindgen exports for the static page in `www/`. Each export is a thin
//! wrapper over a plain function that native tests can call.

use std::f64::consts::TAU;

use fibcmv::fib::SubshiftPoint;
use fibcmv::ising::{bands, fibonacci_couplings, CouplingPattern};
use fibcmv::trace::{spectrum_approx, CoinAngles};
use fibcmv::walk::{coin_assignment, step, CoinTable, WalkState};
use wasm_bindgen::prelude::*;

/// Inputs larger than this would stall the page.
pub const MAX_GRID: usize = 200_000;
pub const MAX_RING: usize = 377;
pub const MAX_STEPS: usize = 4096;

/// `1` for grid angles `2πj/grid` whose trace orbit stays bounded to `depth`.
pub fn spectrum_mask_native(theta_a: f64, theta_b: f64, depth: usize, grid: usize) -> Result<Vec<u8>, String> {
    if grid > MAX_GRID {
        return Err(format!("grid is capped at {MAX_GRID}"));
    }
    let ang = CoinAngles::new(theta_a, theta_b).map_err(|e| e.to_string())?;
    let s = spectrum_approx(&ang, depth, grid).map_err(|e| e.to_string())?;
    Ok(s.mask.into_iter().map(u8::from).collect())
}

#[wasm_bindgen]
pub struct ZeroPlot {
    zeros: Vec<f64>,
    lefts: Vec<f64>,
    rights: Vec<f64>,
}

#[wasm_bindgen]
impl ZeroPlot {
    /// Zero angles in `[0, 2π)`, ascending.
    #[wasm_bindgen(getter)]
    pub fn zeros(&self) -> Vec<f64> {
        self.zeros.clone()
    }

    /// Band `i` runs from `lefts[i]` to `rights[i]` and may pass `2π`.
    #[wasm_bindgen(getter)]
    pub fn lefts(&self) -> Vec<f64> {
        self.lefts.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn rights(&self) -> Vec<f64> {
        self.rights.clone()
    }
}

pub fn ising_zeros_native(ja: f64, jb: f64, tau: f64, length: usize) -> Result<ZeroPlot, String> {
    if length > MAX_RING {
        return Err(format!("length is capped at {MAX_RING}"));
    }
    let ring = fibonacci_couplings(CouplingPattern::real_j(ja, jb), SubshiftPoint::fixed_point(), length, tau, 1.0)
        .map_err(|e| e.to_string())?;
    let b = bands(&ring.verblunsky().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    Ok(ZeroPlot {
        zeros: b.zeros.angles,
        lefts: b.arcs.iter().map(|a| a.0).collect(),
        rights: b.arcs.iter().map(|a| a.1).collect(),
    })
}

#[wasm_bindgen]
pub struct WalkPlot {
    sites: Vec<f64>,
    probs: Vec<f64>,
    spread: Vec<f64>,
}

#[wasm_bindgen]
impl WalkPlot {
    /// Lattice indices of the final state's support.
    #[wasm_bindgen(getter)]
    pub fn sites(&self) -> Vec<f64> {
        self.sites.clone()
    }

    /// `|ψ_m|²` at the final step, aligned with `sites`.
    #[wasm_bindgen(getter)]
    pub fn probs(&self) -> Vec<f64> {
        self.probs.clone()
    }

    /// `sqrt(Σ m² |ψ_m|²)` after each step, starting at step 0.
    #[wasm_bindgen(getter)]
    pub fn spread(&self) -> Vec<f64> {
        self.spread.clone()
    }
}

pub fn walk_profile_native(theta_a: f64, theta_b: f64, omega: &str, steps: usize) -> Result<WalkPlot, String> {
    if steps > MAX_STEPS {
        return Err(format!("steps are capped at {MAX_STEPS}"));
    }
    let ang = CoinAngles::new(theta_a, theta_b).map_err(|e| e.to_string())?;
    let omega: SubshiftPoint = omega.parse().map_err(|e: fibcmv::Error| e.to_string())?;
    let coins = coin_assignment(omega, ang);
    let reach = steps as i64 + 4;
    let table = CoinTable::tabulate(&coins, -reach..reach).map_err(|e| e.to_string())?;
    let mut state = WalkState::localized_for(0, steps).map_err(|e| e.to_string())?;
    let mut spread = Vec::with_capacity(steps + 1);
    for n in 0..=steps {
        if n > 0 {
            state = step(&state, &table).map_err(|e| e.to_string())?;
        }
        // M(n, 2) counts the 1 + m² weight, so the spread is sqrt(M - 1)
        spread.push((state.moment(2.0) - 1.0).max(0.0).sqrt());
    }
    let (sites, probs) = state.probabilities().into_iter().map(|(m, p)| (m as f64, p)).unzip();
    Ok(WalkPlot { sites, probs, spread })
}

#[wasm_bindgen]
pub fn spectrum_mask(theta_a: f64, theta_b: f64, depth: usize, grid: usize) -> Result<Vec<u8>, JsError> {
    spectrum_mask_native(theta_a, theta_b, depth, grid).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn ising_zeros(ja: f64, jb: f64, tau: f64, length: usize) -> Result<ZeroPlot, JsError> {
    ising_zeros_native(ja, jb, tau, length).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn walk_profile(theta_a: f64, theta_b: f64, omega: &str, steps: usize) -> Result<WalkPlot, JsError> {
    walk_profile_native(theta_a, theta_b, omega, steps).map_err(|e| JsError::new(&e))
}

/// Angle of grid point `j` as used by [`spectrum_mask`].
#[wasm_bindgen]
pub fn grid_angle(j: usize, grid: usize) -> f64 {
    TAU * j as f64 / grid as f64
}
