//! Exhaustive or seeded sampling sweeps over the subsets of a small ground set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::{full, Mask};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SweepOptions {
    /// Worker threads; 1 runs on the calling thread.
    pub jobs: usize,
    /// Required once the ground set exceeds `exhaustive_limit` bits.
    pub seed: Option<u64>,
    pub samples: usize,
    pub exhaustive_limit: u32,
    /// Violations kept in the report, smallest masks first.
    pub max_violations: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { jobs: 1, seed: None, samples: 1 << 16, exhaustive_limit: 20, max_violations: 32 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

/// What a probe reports for one subset.
#[derive(Clone, Copy, Debug, Default)]
pub struct Probe {
    pub hits: [bool; 4],
    pub violation: Option<&'static str>,
}

#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub checked: u64,
    pub hits: [u64; 4],
    pub violations: Vec<(Mask, &'static str)>,
    pub violation_count: u64,
}

impl Tally {
    fn add(&mut self, s: Mask, p: Probe, cap: usize) {
        self.checked += 1;
        for (h, &b) in self.hits.iter_mut().zip(&p.hits) {
            *h += b as u64;
        }
        if let Some(k) = p.violation {
            self.violation_count += 1;
            if self.violations.len() < cap {
                self.violations.push((s, k));
            }
        }
    }

    fn merge(mut self, o: Tally, cap: usize) -> Tally {
        self.checked += o.checked;
        for i in 0..4 {
            self.hits[i] += o.hits[i];
        }
        self.violation_count += o.violation_count;
        self.violations.extend(o.violations);
        self.violations.sort_by_key(|v| v.0);
        self.violations.truncate(cap);
        self
    }
}

pub fn sweep<F>(bits: usize, opts: &SweepOptions, probe: F) -> Result<(Mode, Tally)>
where
    F: Fn(Mask) -> Probe + Sync,
{
    let cap = opts.max_violations;
    let (mode, subsets): (Mode, Option<Vec<Mask>>) = if bits as u32 <= opts.exhaustive_limit {
        (Mode::Exhaustive, None)
    } else {
        let seed = opts.seed.ok_or_else(|| {
            Error::SeedRequired(format!("{bits} cells exceed the exhaustive limit of {}", opts.exhaustive_limit))
        })?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = full(bits);
        (Mode::Sampled, Some((0..opts.samples).map(|_| rng.gen::<u64>() & m).collect()))
    };
    let total: u64 = match &subsets {
        None => 1u64 << bits,
        Some(v) => v.len() as u64,
    };
    let at = |i: u64| match &subsets {
        None => i,
        Some(v) => v[i as usize],
    };
    let run = |lo: u64, hi: u64| {
        let mut t = Tally::default();
        for i in lo..hi {
            let s = at(i);
            t.add(s, probe(s), cap);
        }
        t
    };
    let tally = if opts.jobs <= 1 {
        run(0, total)
    } else {
        const CHUNK: u64 = 1 << 12;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::Invalid(e.to_string()))?;
        let chunks = total.div_ceil(CHUNK);
        pool.install(|| {
            (0..chunks)
                .into_par_iter()
                .map(|c| run(c * CHUNK, ((c + 1) * CHUNK).min(total)))
                .reduce(Tally::default, |a, b| a.merge(b, cap))
        })
    };
    Ok((mode, tally))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn probe(s: Mask) -> Probe {
        Probe { hits: [s & 1 == 1, false, false, false], violation: (s.count_ones() == 3).then_some("three") }
    }

    #[test]
    fn exhaustive_counts() {
        let opts = SweepOptions { max_violations: 2, ..Default::default() };
        let (mode, t) = sweep(5, &opts, probe).unwrap();
        assert_eq!(mode, Mode::Exhaustive);
        assert_eq!((t.checked, t.hits[0], t.violation_count), (32, 16, 10));
        assert_eq!(t.violations, vec![(0b00111, "three"), (0b01011, "three")]);
    }

    #[test]
    fn parallel_agrees() {
        let one = sweep(16, &SweepOptions::default(), probe).unwrap().1;
        let many = sweep(16, &SweepOptions { jobs: 4, ..Default::default() }, probe).unwrap().1;
        assert_eq!((one.checked, one.hits, one.violations.clone()), (many.checked, many.hits, many.violations));
    }

    #[test]
    fn sampling_needs_seed() {
        let opts = SweepOptions { exhaustive_limit: 4, ..Default::default() };
        assert!(matches!(sweep(8, &opts, probe), Err(Error::SeedRequired(_))));
        let opts = SweepOptions { exhaustive_limit: 4, seed: Some(7), samples: 100, ..Default::default() };
        let a = sweep(8, &opts, probe).unwrap();
        let b = sweep(8, &opts, probe).unwrap();
        assert_eq!(a.0, Mode::Sampled);
        assert_eq!((a.1.checked, a.1.hits), (b.1.checked, b.1.hits));
    }
}
