//! Seeded chain simulation and the two kernel constructions used for MCMC:
//! coordinate-wise Gibbs conditionals and Metropolis–Hastings.

use crate::codec::ProductSpaceCodec;
use crate::dist::UnnormalizedWeights;
use crate::error::{Error, Result};
use crate::kernel::TransitionKernel;
use crate::util::{neumaier_sum, Fnv1a};

/// The Metropolis–Hastings proposal is just a transition kernel that the
/// caller designates as such.
pub type ProposalKernel = TransitionKernel;

/// Deterministic, seedable random stream (SplitMix64).
///
/// Constants are the standard SplitMix64 ones (Steele, Lea, Flood 2014):
/// increment `0x9E3779B97F4A7C15`, mixers `0xBF58476D1CE4E5B9` and
/// `0x94D049BB133111EB`. Identical seeds yield bit-identical sequences on
/// every platform, which the reproducibility tests rely on. Uniform doubles
/// are built from the top 53 bits, so they lie in `[0, 1)`.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    state: u64,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        RandomStream { seed, state: seed }
    }

    /// The seed this stream started from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent stream for concurrent chain `index`, derived as
    /// `seed XOR index`. Each chain must own its stream exclusively.
    pub fn substream(&self, index: u64) -> RandomStream {
        RandomStream::new(self.seed ^ index)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// A realized sample path together with the seed that produced it and a
/// fingerprint of the generating kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainTrace {
    pub states: Vec<usize>,
    pub seed: u64,
    pub kernel_id: u64,
}

impl ChainTrace {
    /// Number of stored states (`n + 1` for an `n`-step run).
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Every consecutive transition must have positive probability under the
    /// generating kernel.
    pub fn is_feasible(&self, k: &TransitionKernel) -> bool {
        self.states
            .windows(2)
            .all(|w| k.entry(w[0], w[1]) > 0.0)
    }

    /// Serialize as CSV: one `# seed=<u64>` comment line, a `step,state`
    /// header, then one row per link. States are written 1-based, matching
    /// the CLI surface.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# seed={}\nstep,state\n", self.seed);
        for (step, &state) in self.states.iter().enumerate() {
            out.push_str(&format!("{},{}\n", step, state + 1));
        }
        out
    }
}

/// Draw the next state from row `z` by inverse CDF: the smallest
/// positive-probability state whose cumulative row sum reaches the uniform
/// draw. The final positive entry absorbs any floating shortfall, so the
/// returned transition always has positive probability.
pub fn step(k: &TransitionKernel, z: usize, rng: &mut RandomStream) -> usize {
    assert!(z < k.size(), "state index out of range");
    let u = rng.next_f64();
    let row = k.row(z);
    let mut cumulative = 0.0f64;
    let mut last_positive = None;
    for (s, &p) in row.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        cumulative += p;
        last_positive = Some(s);
        if cumulative >= u {
            return s;
        }
    }
    last_positive.expect("stochastic row has a positive entry")
}

/// Simulate `n` steps from `start`; the trace owns its stream.
pub fn run_chain(k: &TransitionKernel, start: usize, n: usize, mut rng: RandomStream) -> ChainTrace {
    assert!(start < k.size(), "start state out of range");
    let mut states = Vec::with_capacity(n + 1);
    states.push(start);
    let mut current = start;
    for _ in 0..n {
        current = step(k, current, &mut rng);
        states.push(current);
    }
    ChainTrace {
        states,
        seed: rng.seed(),
        kernel_id: k.fingerprint(),
    }
}

/// Mean of a vector-valued function over the trace after discarding the
/// first `burn_in` states.
pub fn ergodic_average<F>(trace: &ChainTrace, f: F, burn_in: usize) -> Result<Vec<f64>>
where
    F: Fn(usize) -> Vec<f64>,
{
    if burn_in >= trace.len() {
        return Err(Error::EmptyAfterBurnIn {
            burn_in,
            len: trace.len(),
        });
    }
    let kept = &trace.states[burn_in..];
    let mut acc = f(kept[0]);
    for &s in &kept[1..] {
        let value = f(s);
        assert_eq!(value.len(), acc.len(), "function output length changed");
        for (a, v) in acc.iter_mut().zip(value) {
            *a += v;
        }
    }
    let count = kept.len() as f64;
    for a in acc.iter_mut() {
        *a /= count;
    }
    Ok(acc)
}

/// Scalar convenience form of [`ergodic_average`].
pub fn ergodic_average_scalar<F>(trace: &ChainTrace, f: F, burn_in: usize) -> Result<f64>
where
    F: Fn(usize) -> f64,
{
    if burn_in >= trace.len() {
        return Err(Error::EmptyAfterBurnIn {
            burn_in,
            len: trace.len(),
        });
    }
    let kept = &trace.states[burn_in..];
    let sum = neumaier_sum(kept.iter().map(|&s| f(s)));
    Ok(sum / kept.len() as f64)
}

/// Single-coordinate Gibbs kernel: from state `z`, resample coordinate
/// `coord` from its exact conditional under the target, keeping all other
/// coordinates fixed.
///
/// Rows whose whole fiber carries zero target mass get a point mass at the
/// current state so the kernel stays well formed; such rows are never
/// reached from a positive-mass start. Use
/// [`gibbs_conditional_kernel_with_fixed_rows`] to have those rows reported.
pub fn gibbs_conditional_kernel(
    target: &UnnormalizedWeights,
    codec: &ProductSpaceCodec,
    coord: usize,
) -> Result<TransitionKernel> {
    gibbs_conditional_kernel_with_fixed_rows(target, codec, coord).map(|(k, _)| k)
}

/// As [`gibbs_conditional_kernel`], also returning the (usually empty) list
/// of zero-mass-fiber rows that were frozen to a point mass.
pub fn gibbs_conditional_kernel_with_fixed_rows(
    target: &UnnormalizedWeights,
    codec: &ProductSpaceCodec,
    coord: usize,
) -> Result<(TransitionKernel, Vec<usize>)> {
    if coord >= codec.coords() {
        return Err(Error::CoordinateOutOfRange {
            coord,
            coords: codec.coords(),
        });
    }
    if target.len() != codec.total() {
        return Err(Error::SpaceMismatch {
            left: target.len(),
            right: codec.total(),
        });
    }
    let k = codec.total();
    let values = codec.values_per_coord();
    let weights = target.weights();
    let mut rows = vec![vec![0.0; k]; k];
    let mut fixed_rows = Vec::new();
    let mut tuple = vec![0usize; codec.coords()];
    for z in 0..k {
        codec.decode_into(z, &mut tuple);
        // The fiber through z along `coord`: all states agreeing with z on
        // every other coordinate.
        let mut fiber = Vec::with_capacity(values);
        let mut denominator = 0.0f64;
        for value in 0..values {
            tuple[coord] = value;
            let s = codec.encode(&tuple);
            fiber.push(s);
            denominator += weights[s];
        }
        if denominator > 0.0 {
            for &s in &fiber {
                rows[z][s] = weights[s] / denominator;
            }
        } else {
            rows[z][z] = 1.0;
            fixed_rows.push(z);
        }
    }
    let kernel = TransitionKernel::new(target.space().clone(), rows)?;
    Ok((kernel, fixed_rows))
}

/// Full Gibbs sweep: the composition of the single-coordinate kernels in
/// cyclic coordinate order `0, 1, ..., m-1`, so one transition of the
/// returned kernel updates every coordinate once.
pub fn gibbs_sweep_kernel(
    target: &UnnormalizedWeights,
    codec: &ProductSpaceCodec,
) -> Result<TransitionKernel> {
    let mut sweep = gibbs_conditional_kernel(target, codec, 0)?;
    for coord in 1..codec.coords() {
        let next = gibbs_conditional_kernel(target, codec, coord)?;
        sweep = sweep.compose(&next)?;
    }
    Ok(sweep)
}

/// Metropolis–Hastings acceptance probability for a proposed move `z -> s`.
///
/// `min(1, (w_s / w_z) * (q_sz / q_zs))`, with the convention that a zero
/// denominator means certain acceptance: a zero-mass current state is left
/// as soon as the proposal allows. The weight ratio is computed first, so
/// rescaling all weights by an exactly representable constant provably
/// leaves every acceptance probability bit-identical.
pub fn mh_acceptance(
    target: &UnnormalizedWeights,
    proposal: &ProposalKernel,
    z: usize,
    s: usize,
) -> f64 {
    if z == s {
        return 1.0;
    }
    let w = target.weights();
    let q_zs = proposal.entry(z, s);
    if w[z] == 0.0 || q_zs == 0.0 {
        return 1.0;
    }
    let ratio = (w[s] / w[z]) * (proposal.entry(s, z) / q_zs);
    ratio.min(1.0)
}

/// The explicit Metropolis–Hastings kernel for a target given by
/// unnormalized weights and a proposal kernel.
///
/// Off-diagonal: `q_zs * alpha_zs`. Diagonal: whatever mass is left, i.e.
/// rejection mass plus any proposal self-loop.
pub fn mh_kernel(
    target: &UnnormalizedWeights,
    proposal: &ProposalKernel,
) -> Result<TransitionKernel> {
    target.space().check_same(proposal.space())?;
    let k = target.len();
    let mut rows = vec![vec![0.0; k]; k];
    for z in 0..k {
        let mut off_diagonal = 0.0f64;
        for s in 0..k {
            if s == z {
                continue;
            }
            let q_zs = proposal.entry(z, s);
            if q_zs == 0.0 {
                continue;
            }
            let move_probability = q_zs * mh_acceptance(target, proposal, z, s);
            rows[z][s] = move_probability;
            off_diagonal += move_probability;
        }
        rows[z][z] = (1.0 - off_diagonal).max(0.0);
    }
    TransitionKernel::new(target.space().clone(), rows)
}

/// One Metropolis–Hastings transition: propose from `q_z`, accept with
/// probability `alpha`, otherwise stay. Distributionally identical to
/// stepping the kernel from [`mh_kernel`]; the agreement is covered by
/// tests rather than assumed.
pub fn mh_step(
    target: &UnnormalizedWeights,
    proposal: &ProposalKernel,
    z: usize,
    rng: &mut RandomStream,
) -> usize {
    let proposed = step(proposal, z, rng);
    let alpha = mh_acceptance(target, proposal, z, proposed);
    let u = rng.next_f64();
    if u < alpha {
        proposed
    } else {
        z
    }
}

/// Simulate `n` Metropolis–Hastings steps from `start`.
pub fn run_mh_chain(
    target: &UnnormalizedWeights,
    proposal: &ProposalKernel,
    start: usize,
    n: usize,
    mut rng: RandomStream,
) -> Result<ChainTrace> {
    target.space().check_same(proposal.space())?;
    if start >= target.len() {
        return Err(Error::StateOutOfRange {
            state: start,
            size: target.len(),
        });
    }
    let mut states = Vec::with_capacity(n + 1);
    states.push(start);
    let mut current = start;
    for _ in 0..n {
        current = mh_step(target, proposal, current, &mut rng);
        states.push(current);
    }
    let mut h = Fnv1a::new();
    h.write_u64(target.len() as u64);
    for &w in target.weights() {
        h.write_f64(w);
    }
    h.write_u64(proposal.fingerprint());
    Ok(ChainTrace {
        states,
        seed: rng.seed(),
        kernel_id: h.finish(),
    })
}
