//! Sum-product belief propagation on the detector/channel Tanner graph.

use crate::dem::DetectorErrorModel;

/// Messages are kept within `[EPS, 1 - EPS]` in probability terms.
pub const EPS: f64 = 1e-12;

fn llr_bound() -> f64 {
    ((1.0 - EPS) / EPS).ln()
}

/// Tanner graph with edge-indexed message storage.
#[derive(Clone, Debug)]
pub struct TannerGraph {
    pub n_checks: usize,
    pub priors: Vec<f64>,
    /// Per variable: its check ids.
    var_checks: Vec<Vec<u32>>,
    /// Per check: message slots `(variable, slot)` of its incident edges.
    check_edges: Vec<Vec<(u32, u32)>>,
    /// Start of each variable's slots in the flat message arrays.
    var_offset: Vec<usize>,
}

impl TannerGraph {
    pub fn new(dem: &DetectorErrorModel) -> Self {
        let mut var_checks = Vec::with_capacity(dem.channels.len());
        let mut check_edges = vec![Vec::new(); dem.n_detectors];
        let mut var_offset = Vec::with_capacity(dem.channels.len() + 1);
        let mut slot = 0usize;
        for (v, c) in dem.channels.iter().enumerate() {
            var_offset.push(slot);
            for &d in &c.detectors {
                check_edges[d as usize].push((v as u32, slot as u32));
                slot += 1;
            }
            var_checks.push(c.detectors.clone());
        }
        var_offset.push(slot);
        Self {
            n_checks: dem.n_detectors,
            priors: dem.channels.iter().map(|c| c.probability).collect(),
            var_checks,
            check_edges,
            var_offset,
        }
    }

    pub fn n_variables(&self) -> usize {
        self.priors.len()
    }

    /// Posterior flip probability of every channel after `iterations`
    /// flooding rounds, given the flagged detectors.
    pub fn posteriors(&self, flagged: &[u32], iterations: usize) -> Vec<f64> {
        self.run(flagged, iterations, false).posteriors
    }

    /// Runs BP; with `stop_on_solution` it stops after the first round whose
    /// hard decision reproduces the syndrome.
    pub fn run(&self, flagged: &[u32], iterations: usize, stop_on_solution: bool) -> BpOutcome {
        let bound = llr_bound();
        let mut syndrome = vec![false; self.n_checks];
        for &d in flagged {
            syndrome[d as usize] = true;
        }
        let prior: Vec<f64> = self
            .priors
            .iter()
            .map(|&p| {
                let p = p.clamp(EPS, 1.0 - EPS);
                ((1.0 - p) / p).ln()
            })
            .collect();
        let n_slots = *self.var_offset.last().unwrap();
        let mut to_check = vec![0.0f64; n_slots];
        let mut to_var = vec![0.0f64; n_slots];
        for v in 0..self.n_variables() {
            for s in self.var_offset[v]..self.var_offset[v + 1] {
                to_check[s] = prior[v];
            }
        }
        let mut total = prior.clone();
        let mut tanh_buf = Vec::new();
        let mut prefix: Vec<f64> = Vec::new();
        let mut solution = None;
        let mut rounds = 0;
        for _ in 0..iterations.max(1) {
            rounds += 1;
            for (c, edges) in self.check_edges.iter().enumerate() {
                tanh_buf.clear();
                tanh_buf.extend(edges.iter().map(|&(_, s)| (to_check[s as usize] / 2.0).tanh()));
                let sign = if syndrome[c] { -1.0 } else { 1.0 };
                // leave-one-out products from prefix and suffix products
                let deg = edges.len();
                prefix.clear();
                prefix.push(1.0);
                for k in 0..deg {
                    let last = prefix[k];
                    prefix.push(last * tanh_buf[k]);
                }
                let mut suffix = 1.0;
                for k in (0..deg).rev() {
                    let prod = prefix[k] * suffix;
                    suffix *= tanh_buf[k];
                    let m = sign * 2.0 * prod.clamp(-1.0 + 1e-15, 1.0 - 1e-15).atanh();
                    to_var[edges[k].1 as usize] = m.clamp(-bound, bound);
                }
            }
            for v in 0..self.n_variables() {
                let range = self.var_offset[v]..self.var_offset[v + 1];
                total[v] = prior[v] + to_var[range.clone()].iter().sum::<f64>();
                for s in range {
                    to_check[s] = (total[v] - to_var[s]).clamp(-bound, bound);
                }
            }
            if stop_on_solution {
                let hard: Vec<usize> = (0..self.n_variables()).filter(|&v| total[v] < 0.0).collect();
                let mut parity = vec![false; self.n_checks];
                for &v in &hard {
                    for &c in &self.var_checks[v] {
                        parity[c as usize] ^= true;
                    }
                }
                if parity == syndrome {
                    solution = Some(hard);
                    break;
                }
            }
        }
        BpOutcome {
            posteriors: total.iter().map(|l| 1.0 / (1.0 + l.exp())).collect(),
            solution,
            iterations: rounds,
        }
    }

    pub fn checks_of(&self, v: usize) -> &[u32] {
        &self.var_checks[v]
    }
}

#[derive(Clone, Debug)]
pub struct BpOutcome {
    pub posteriors: Vec<f64>,
    /// Channels of a hard decision that reproduces the syndrome, if BP
    /// stopped on one.
    pub solution: Option<Vec<usize>>,
    pub iterations: usize,
}

/// Posterior flip probability of every DEM channel.
pub fn bp_posteriors(dem: &DetectorErrorModel, flagged: &[u32], iterations: usize) -> Vec<f64> {
    TannerGraph::new(dem).posteriors(flagged, iterations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dem::Channel;

    fn dem(channels: Vec<(f64, Vec<u32>)>, n: usize) -> DetectorErrorModel {
        DetectorErrorModel {
            n_detectors: n,
            n_observables: 1,
            detector_classes: Vec::new(),
            provenance: vec![Vec::new(); channels.len()],
            channels: channels
                .into_iter()
                .map(|(probability, detectors)| Channel {
                    probability,
                    detectors,
                    observables: 0,
                })
                .collect(),
        }
    }

    #[test]
    fn forced_channel() {
        let post = bp_posteriors(&dem(vec![(0.01, vec![0])], 1), &[0], 3);
        assert!(post[0] > 1.0 - 1e-9);
    }

    #[test]
    fn zero_syndrome_two_channels_one_iteration() {
        // Two channels on one check: the message to each is
        // 2 atanh(tanh(L_other / 2)) = L_other, so the posterior LLR is
        // L_self + L_other.
        let p = [0.01, 0.02];
        let post = bp_posteriors(&dem(vec![(p[0], vec![0]), (p[1], vec![0])], 1), &[], 1);
        let l = |p: f64| ((1.0 - p) / p).ln();
        for i in 0..2 {
            let want = 1.0 / (1.0 + (l(p[0]) + l(p[1])).exp());
            assert!((post[i] - want).abs() < 1e-12);
            assert!(post[i] <= p[i]);
        }
    }

    #[test]
    fn uninformative_priors_are_returned() {
        let d = dem(vec![(0.5, vec![0, 1]), (0.5, vec![1]), (0.5, vec![0])], 2);
        for (a, b) in bp_posteriors(&d, &[], 5).iter().zip(&[0.5, 0.5, 0.5]) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn stops_on_consistent_hard_decision() {
        let t = TannerGraph::new(&dem(vec![(0.01, vec![0, 1]), (0.02, vec![1])], 2));
        let out = t.run(&[0, 1], 10, true);
        assert_eq!(out.solution, Some(vec![0]));
        // after one round channel 1 is flipped too (LLR 3.9 - 4.6 < 0)
        assert!(out.iterations > 1 && out.iterations < 10);
        assert!(t.run(&[0, 1], 10, false).solution.is_none());
    }

    #[test]
    fn undetectable_channel_keeps_prior() {
        let post = bp_posteriors(&dem(vec![(0.03, vec![])], 1), &[0], 2);
        assert!((post[0] - 0.03).abs() < 1e-12);
    }
}
