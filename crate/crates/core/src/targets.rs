//! Target distributions: explicit tables, the reducible-Gibbs showcase
//! target, and Ising grids small enough for exact enumeration.

use crate::codec::ProductSpaceCodec;
use crate::dist::{Distribution, UnnormalizedWeights};
use crate::error::{Error, Result};
use crate::sampler::RandomStream;
use crate::util::neumaier_sum;

/// Largest grid (in sites) for which the exact enumeration oracle is kept
/// available: 2^20 configurations.
pub const MAX_ISING_SITES: usize = 20;

/// Nearest-neighbor Ising model on a `width x height` grid with free
/// (non-wrapping) boundary and no external field.
///
/// Configuration weight: `exp(beta * sum_{<i,j> adjacent} s_i s_j)` with
/// spins `s_i` in `{-1, +1}` and each unordered 4-neighborhood pair counted
/// once. Construction caps the grid at [`MAX_ISING_SITES`] so the weight
/// table stays exactly enumerable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsingModel {
    width: usize,
    height: usize,
    beta: f64,
}

impl IsingModel {
    pub fn new(width: usize, height: usize, beta: f64) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument(
                "grid dimensions must be positive".into(),
            ));
        }
        if !beta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "beta must be finite, got {beta}"
            )));
        }
        let sites = width * height;
        if sites > MAX_ISING_SITES {
            return Err(Error::GridTooLarge {
                sites,
                cap: MAX_ISING_SITES,
            });
        }
        Ok(IsingModel {
            width,
            height,
            beta,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sites(&self) -> usize {
        self.width * self.height
    }

    /// Codec over spin configurations; value index 0 maps to spin -1 and
    /// value index 1 to spin +1, sites in row-major order.
    pub fn codec(&self) -> ProductSpaceCodec {
        ProductSpaceCodec::new(self.sites(), 2).expect("grid capped at 20 sites")
    }

    /// 4-neighborhood of a site under the free boundary.
    pub fn neighbors(&self, site: usize) -> Vec<usize> {
        let (w, h) = (self.width, self.height);
        let (row, col) = (site / w, site % w);
        let mut out = Vec::with_capacity(4);
        if row > 0 {
            out.push(site - w);
        }
        if row + 1 < h {
            out.push(site + w);
        }
        if col > 0 {
            out.push(site - 1);
        }
        if col + 1 < w {
            out.push(site + 1);
        }
        out
    }

    /// Unordered adjacent pairs, each listed once (right and down edges).
    fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for row in 0..self.height {
            for col in 0..self.width {
                let site = row * self.width + col;
                if col + 1 < self.width {
                    edges.push((site, site + 1));
                }
                if row + 1 < self.height {
                    edges.push((site, site + self.width));
                }
            }
        }
        edges
    }

    /// Spins of the configuration with the given flat index.
    pub fn decode_spins(&self, index: usize) -> Vec<i8> {
        let codec = self.codec();
        codec
            .decode(index)
            .into_iter()
            .map(|v| if v == 0 { -1 } else { 1 })
            .collect()
    }

    /// Flat index of a spin configuration.
    pub fn encode_spins(&self, spins: &[i8]) -> usize {
        let codec = self.codec();
        let tuple: Vec<usize> = spins.iter().map(|&s| if s > 0 { 1 } else { 0 }).collect();
        codec.encode(&tuple)
    }

    /// Mean spin of a configuration, in `[-1, 1]`.
    pub fn magnetization(&self, spins: &[i8]) -> f64 {
        let total: i32 = spins.iter().map(|&s| s as i32).sum();
        total as f64 / self.sites() as f64
    }

    /// Conditional probability that `site` is `+1` given all other spins:
    /// the logistic function `sigma(2 * beta * h)` where `h` is the sum of
    /// the neighboring spins. Agrees with the generic single-coordinate
    /// Gibbs conditional computed from the weight table; the test suite
    /// checks the two routes against each other rather than assuming it.
    pub fn site_conditional_plus(&self, spins: &[i8], site: usize) -> Result<f64> {
        if site >= self.sites() {
            return Err(Error::SiteOutOfRange {
                site,
                sites: self.sites(),
            });
        }
        if spins.len() != self.sites() {
            return Err(Error::SpaceMismatch {
                left: self.sites(),
                right: spins.len(),
            });
        }
        let field: i32 = self
            .neighbors(site)
            .into_iter()
            .map(|n| spins[n] as i32)
            .sum();
        let exponent = 2.0 * self.beta * field as f64;
        Ok(1.0 / (1.0 + (-exponent).exp()))
    }
}

/// Weight table over all `2^(width*height)` spin configurations, indexed via
/// the model codec.
pub fn ising_weights(model: &IsingModel) -> UnnormalizedWeights {
    let codec = model.codec();
    let edges = model.edges();
    let total = codec.total();
    let mut weights = Vec::with_capacity(total);
    let mut tuple = vec![0usize; model.sites()];
    for index in 0..total {
        codec.decode_into(index, &mut tuple);
        let mut energy = 0i32;
        for &(a, b) in &edges {
            let sa = 2 * tuple[a] as i32 - 1;
            let sb = 2 * tuple[b] as i32 - 1;
            energy += sa * sb;
        }
        weights.push((model.beta * energy as f64).exp());
    }
    UnnormalizedWeights::from_weights(weights).expect("exp weights are positive")
}

/// Exact expectation `sum_s w_s f(s) / sum_s w_s`, the brute-force oracle
/// every sampler estimate is compared against. Summation is compensated, so
/// the reduction order cannot perturb results at tolerance scale.
pub fn enumerate_expectation<F>(weights: &UnnormalizedWeights, f: F) -> f64
where
    F: Fn(usize) -> f64,
{
    let numerator = neumaier_sum(
        weights
            .weights()
            .iter()
            .enumerate()
            .map(|(s, &w)| w * f(s)),
    );
    let denominator = neumaier_sum(weights.weights().iter().copied());
    numerator / denominator
}

/// The two-coordinate binary target with all mass split between `(0,1)` and
/// `(1,0)`: `(0, 1/2, 1/2, 0)` in codec order `(0,0), (0,1), (1,0), (1,1)`.
///
/// Single-coordinate resampling can never leave the anti-diagonal, so the
/// Gibbs sweep kernel for this target is reducible; it is the standard
/// witness that Gibbs transitions are completely pinned by the target.
pub fn anti_diagonal_target() -> (Distribution, ProductSpaceCodec) {
    let codec = ProductSpaceCodec::new(2, 2).expect("tiny space");
    let pi = Distribution::from_mass(vec![0.0, 0.5, 0.5, 0.0]).expect("valid");
    (pi, codec)
}

/// One full Gibbs sweep pass over an Ising configuration, updating sites in
/// row-major order from their exact conditionals. Returns the number of
/// sites flipped.
pub fn ising_sweep_in_place(
    model: &IsingModel,
    spins: &mut [i8],
    rng: &mut RandomStream,
) -> usize {
    let mut flips = 0;
    for site in 0..model.sites() {
        let p_plus = model
            .site_conditional_plus(spins, site)
            .expect("site in range");
        let new_spin = if rng.next_f64() < p_plus { 1 } else { -1 };
        if new_spin != spins[site] {
            flips += 1;
        }
        spins[site] = new_spin;
    }
    flips
}

/// Per-sweep magnetization trace of a Gibbs run.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingGibbsRun {
    /// Mean spin after each completed sweep.
    pub magnetization: Vec<f64>,
    /// Final configuration.
    pub spins: Vec<i8>,
    pub seed: u64,
}

impl IsingGibbsRun {
    /// Serialize as CSV: `# seed=<u64>`, header `sweep,magnetization`, one
    /// row per completed sweep.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# seed={}\nsweep,magnetization\n", self.seed);
        for (sweep, &m) in self.magnetization.iter().enumerate() {
            out.push_str(&format!("{},{}\n", sweep + 1, m));
        }
        out
    }
}

/// Run `sweeps` full Gibbs sweeps starting from the all-up configuration.
pub fn run_ising_gibbs(model: &IsingModel, sweeps: usize, mut rng: RandomStream) -> IsingGibbsRun {
    let mut spins = vec![1i8; model.sites()];
    let mut magnetization = Vec::with_capacity(sweeps);
    for _ in 0..sweeps {
        ising_sweep_in_place(model, &mut spins, &mut rng);
        magnetization.push(model.magnetization(&spins));
    }
    IsingGibbsRun {
        magnetization,
        spins,
        seed: rng.seed(),
    }
}
