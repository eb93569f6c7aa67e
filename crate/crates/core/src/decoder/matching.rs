//! Exact minimum-weight perfect matching decoding.

use serde::Serialize;

use crate::decoder::blossom::min_weight_perfect_matching;
use crate::decoder::graph::{MatchingGraph, UNREACHABLE, WEIGHT_SCALE};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub observables: u64,
    /// Matched detector pairs; `None` partners are boundary matches.
    pub pairs: Vec<(u32, Option<u32>)>,
    /// Total weight in fixed-point units.
    pub weight: i64,
}

impl Prediction {
    pub fn weight_f64(&self) -> f64 {
        self.weight as f64 / WEIGHT_SCALE
    }

    /// Whether the matched pairs cover exactly the flagged detectors.
    pub fn covers(&self, flagged: &[u32]) -> bool {
        let mut seen: Vec<u32> = self
            .pairs
            .iter()
            .flat_map(|&(a, b)| std::iter::once(a).chain(b))
            .collect();
        seen.sort_unstable();
        let mut want = flagged.to_vec();
        want.sort_unstable();
        seen == want
    }
}

/// Path lengths and observable masks among flagged detectors and to the boundary.
pub struct Distances {
    pub k: usize,
    pub dist: Vec<i64>,
    pub obs: Vec<u64>,
    pub to_boundary: Vec<i64>,
    pub boundary_obs: Vec<u64>,
}

impl Distances {
    pub fn from_fn(k: usize, f: impl Fn(usize, Option<usize>) -> (i64, u64)) -> Self {
        let mut dist = vec![UNREACHABLE; k * k];
        let mut obs = vec![0; k * k];
        let mut to_boundary = Vec::with_capacity(k);
        let mut boundary_obs = Vec::with_capacity(k);
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    let (d, o) = f(i, Some(j));
                    dist[i * k + j] = d;
                    obs[i * k + j] = o;
                }
            }
            let (d, o) = f(i, None);
            to_boundary.push(d);
            boundary_obs.push(o);
        }
        Self {
            k,
            dist,
            obs,
            to_boundary,
            boundary_obs,
        }
    }

    fn d(&self, i: usize, j: usize) -> i64 {
        self.dist[i * self.k + j]
    }

    fn o(&self, i: usize, j: usize) -> u64 {
        self.obs[i * self.k + j]
    }

    /// `i`–`j` is worth considering only if it beats sending both to the boundary.
    fn useful(&self, i: usize, j: usize) -> bool {
        let d = self.d(i, j);
        d < UNREACHABLE
            && (self.to_boundary[i] >= UNREACHABLE
                || self.to_boundary[j] >= UNREACHABLE
                || d < self.to_boundary[i] + self.to_boundary[j])
    }
}

fn assemble(flagged: &[u32], dist: &Distances, matched: &[(usize, Option<usize>)]) -> Prediction {
    let mut p = Prediction::default();
    for &(i, j) in matched {
        match j {
            Some(j) => {
                p.weight += dist.d(i, j);
                p.observables ^= dist.o(i, j);
                p.pairs.push((flagged[i], Some(flagged[j])));
            }
            None => {
                p.weight += dist.to_boundary[i];
                p.observables ^= dist.boundary_obs[i];
                p.pairs.push((flagged[i], None));
            }
        }
    }
    p.pairs.sort_unstable();
    p
}

/// Minimum-weight perfect matching of flagged detectors given their distances.
pub fn solve(flagged: &[u32], dist: &Distances) -> Result<Prediction> {
    let k = flagged.len();
    // Components of the pruned detector graph are independent problems.
    let mut comp: Vec<usize> = (0..k).collect();
    fn find(c: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while c[r] != r {
            r = c[r];
        }
        let mut y = x;
        while c[y] != r {
            let next = c[y];
            c[y] = r;
            y = next;
        }
        r
    }
    let mut useful = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if dist.useful(i, j) {
                useful.push((i, j));
                let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                comp[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of = vec![usize::MAX; k];
    for i in 0..k {
        let r = find(&mut comp, i);
        if group_of[r] == usize::MAX {
            group_of[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[group_of[r]].push(i);
    }
    let mut edges_of: Vec<Vec<(usize, usize)>> = vec![Vec::new(); groups.len()];
    for &(i, j) in &useful {
        edges_of[group_of[find(&mut comp, i)]].push((i, j));
    }

    let mut matched: Vec<(usize, Option<usize>)> = Vec::new();
    for (g, members) in groups.iter().enumerate() {
        match members.as_slice() {
            [i] => {
                if dist.to_boundary[*i] >= UNREACHABLE {
                    return Err(Error::Decoder(format!(
                        "detector {} cannot reach the boundary or another flagged detector",
                        flagged[*i]
                    )));
                }
                matched.push((*i, None));
            }
            [i, j] => {
                let (i, j) = (*i, *j);
                let apart = dist.to_boundary[i].saturating_add(dist.to_boundary[j]);
                if dist.d(i, j) <= apart {
                    matched.push((i, Some(j)));
                } else {
                    matched.push((i, None));
                    matched.push((j, None));
                }
            }
            _ => matched.extend(blossom_component(flagged, members, &edges_of[g], dist)?),
        }
    }
    let p = assemble(flagged, dist, &matched);
    debug_assert!(p.covers(flagged));
    Ok(p)
}

fn blossom_component(
    flagged: &[u32],
    members: &[usize],
    pairs: &[(usize, usize)],
    dist: &Distances,
) -> Result<Vec<(usize, Option<usize>)>> {
    let m = members.len();
    let mut local = vec![usize::MAX; dist.k];
    for (a, &i) in members.iter().enumerate() {
        local[i] = a;
    }
    // Nodes 0..m are detectors, m..2m their boundary copies.
    let mut raw: Vec<(usize, usize, i64)> = Vec::new();
    for &(i, j) in pairs {
        let (a, b) = (local[i], local[j]);
        raw.push((a, b, dist.d(i, j)));
        raw.push((m + a, m + b, 0));
    }
    for (a, &i) in members.iter().enumerate() {
        if dist.to_boundary[i] < UNREACHABLE {
            raw.push((a, m + a, dist.to_boundary[i]));
        }
    }
    let mate = min_weight_perfect_matching(2 * m, &raw).ok_or_else(|| {
        Error::Decoder(format!("no perfect matching covers detector {}", flagged[members[0]]))
    })?;
    let mut out = Vec::new();
    for a in 0..m {
        match mate[a] {
            b if b < m => {
                if a < b {
                    out.push((members[a], Some(members[b])));
                }
            }
            b if b == m + a => out.push((members[a], None)),
            _ => {
                return Err(Error::Decoder(format!(
                    "no perfect matching covers detector {}",
                    flagged[members[a]]
                )))
            }
        }
    }
    Ok(out)
}

/// Largest instance the exhaustive oracle accepts.
pub const BRUTE_FORCE_LIMIT: usize = 12;

/// Exhaustive minimum over all pairings and boundary assignments.
///
/// Also reports whether the minimum weight is attained by more than one
/// assignment.
pub fn brute_force(flagged: &[u32], dist: &Distances) -> Result<(Prediction, bool)> {
    let k = flagged.len();
    if k > BRUTE_FORCE_LIMIT {
        return Err(Error::Decoder(format!(
            "brute force is limited to {BRUTE_FORCE_LIMIT} flagged detectors, got {k}"
        )));
    }
    struct Best {
        weight: i64,
        matched: Vec<(usize, Option<usize>)>,
        ties: usize,
    }
    fn go(
        dist: &Distances,
        used: &mut Vec<bool>,
        cur: &mut Vec<(usize, Option<usize>)>,
        w: i64,
        best: &mut Best,
    ) {
        let Some(i) = used.iter().position(|u| !u) else {
            if w < best.weight {
                best.weight = w;
                best.matched = cur.clone();
                best.ties = 1;
            } else if w == best.weight {
                best.ties += 1;
            }
            return;
        };
        used[i] = true;
        if dist.to_boundary[i] < UNREACHABLE {
            cur.push((i, None));
            go(dist, used, cur, w + dist.to_boundary[i], best);
            cur.pop();
        }
        for j in i + 1..used.len() {
            if !used[j] && dist.d(i, j) < UNREACHABLE {
                used[j] = true;
                cur.push((i, Some(j)));
                go(dist, used, cur, w + dist.d(i, j), best);
                cur.pop();
                used[j] = false;
            }
        }
        used[i] = false;
    }
    let mut best = Best {
        weight: i64::MAX,
        matched: Vec::new(),
        ties: 0,
    };
    go(dist, &mut vec![false; k], &mut Vec::new(), 0, &mut best);
    if best.ties == 0 {
        return Err(Error::Decoder("no perfect matching exists".into()));
    }
    Ok((assemble(flagged, dist, &best.matched), best.ties > 1))
}

/// Plain matching decoder with all-pairs shortest paths precomputed.
pub struct MatchingDecoder {
    pub graph: MatchingGraph,
    /// Row `u`: distances from detector `u` to every node (boundary last).
    dist: Vec<i64>,
    obs: Vec<u64>,
}

impl MatchingDecoder {
    pub fn new(graph: MatchingGraph) -> Self {
        let n = graph.n_detectors;
        let mut dist = Vec::with_capacity(n * (n + 1));
        let mut obs = Vec::with_capacity(n * (n + 1));
        let edge_obs = graph.edge_observables();
        for u in 0..n {
            let (d, o) = graph.dijkstra(u as u32, graph.int_weights(), &edge_obs);
            dist.extend(d);
            obs.extend(o);
        }
        Self { graph, dist, obs }
    }

    pub fn distances(&self, flagged: &[u32]) -> Distances {
        let w = self.graph.n_detectors + 1;
        let b = self.graph.n_detectors;
        Distances::from_fn(flagged.len(), |i, j| {
            let row = flagged[i] as usize * w;
            let col = j.map_or(b, |j| flagged[j] as usize);
            (self.dist[row + col], self.obs[row + col])
        })
    }

    pub fn decode(&self, flagged: &[u32]) -> Result<Prediction> {
        self.check(flagged)?;
        solve(flagged, &self.distances(flagged))
    }

    pub fn decode_brute_force(&self, flagged: &[u32]) -> Result<(Prediction, bool)> {
        self.check(flagged)?;
        brute_force(flagged, &self.distances(flagged))
    }

    fn check(&self, flagged: &[u32]) -> Result<()> {
        match flagged.iter().find(|&&d| d as usize >= self.graph.n_detectors) {
            Some(d) => Err(Error::Decoder(format!("detector {d} is out of range"))),
            None => Ok(()),
        }
    }
}

/// Distances among flagged detectors under per-shot edge weights.
pub fn distances_with_weights(
    graph: &MatchingGraph,
    flagged: &[u32],
    weights: &[i64],
    obs: &[u64],
) -> Distances {
    let rows: Vec<(Vec<i64>, Vec<u64>)> = flagged
        .iter()
        .map(|&u| graph.dijkstra(u, weights, obs))
        .collect();
    let b = graph.n_detectors;
    Distances::from_fn(flagged.len(), |i, j| {
        let col = j.map_or(b, |j| flagged[j] as usize);
        (rows[i].0[col], rows[i].1[col])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dem::{DecomposedDem, Edge};

    fn path_graph(n: usize) -> MatchingDecoder {
        let mut edges = vec![Edge {
            detectors: vec![0],
            observables: 1,
            probability: 0.01,
        }];
        for i in 0..n - 1 {
            edges.push(Edge {
                detectors: vec![i as u32, i as u32 + 1],
                observables: 0,
                probability: 0.1,
            });
        }
        edges.push(Edge {
            detectors: vec![n as u32 - 1],
            observables: 0,
            probability: 0.01,
        });
        let ddem = DecomposedDem {
            n_detectors: n,
            n_observables: 1,
            components: (0..edges.len()).map(|i| vec![i]).collect(),
            edges,
            residue: vec![],
            mismatched: vec![],
            undetectable: vec![],
        };
        MatchingDecoder::new(MatchingGraph::build(&ddem).unwrap())
    }

    #[test]
    fn empty_syndrome() {
        let d = path_graph(4);
        assert_eq!(d.decode(&[]).unwrap(), Prediction::default());
    }

    #[test]
    fn adjacent_pair_matches_directly() {
        let d = path_graph(4);
        let p = d.decode(&[1, 2]).unwrap();
        assert_eq!(p.pairs, vec![(1, Some(2))]);
        assert_eq!(p.observables, 0);
    }

    #[test]
    fn end_detector_goes_to_boundary() {
        let d = path_graph(4);
        let p = d.decode(&[0]).unwrap();
        assert_eq!(p.pairs, vec![(0, None)]);
        assert_eq!(p.observables, 1);
    }

    #[test]
    fn path_of_four_takes_best_of_three_pairings() {
        let d = path_graph(6);
        let f = [1, 2, 3, 4];
        let dist = d.distances(&f);
        let pairings = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
        let best = pairings
            .iter()
            .map(|p| p.iter().map(|&(i, j)| dist.d(i, j)).sum::<i64>())
            .min()
            .unwrap();
        assert_eq!(d.decode(&f).unwrap().weight, best);
        assert_eq!(d.decode_brute_force(&f).unwrap().0.weight, best);
    }

    #[test]
    fn brute_force_refuses_large_instances() {
        let d = path_graph(14);
        let f: Vec<u32> = (0..13).collect();
        assert!(d.decode_brute_force(&f).is_err());
    }
}
