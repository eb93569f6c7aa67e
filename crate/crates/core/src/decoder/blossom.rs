//! Maximum-weight matching on general graphs (Edmonds' blossom algorithm
//! with primal-dual updates, O(n^3)), integer weights.

const NONE: usize = usize::MAX;

struct State<'a> {
    n: usize,
    edges: &'a [(usize, usize, i64)],
    endpoint: Vec<usize>,
    /// Remote endpoints of the edges at vertex `v` are
    /// `neighbend[neighoff[v]..neighoff[v + 1]]`.
    neighoff: Vec<usize>,
    neighbend: Vec<usize>,
    mate: Vec<usize>,
    label: Vec<u8>,
    labelend: Vec<usize>,
    inblossom: Vec<usize>,
    blossomparent: Vec<usize>,
    blossomchilds: Vec<Vec<usize>>,
    blossombase: Vec<usize>,
    blossomendps: Vec<Vec<usize>>,
    bestedge: Vec<usize>,
    blossombestedges: Vec<Option<Vec<usize>>>,
    unusedblossoms: Vec<usize>,
    dualvar: Vec<i64>,
    allowedge: Vec<bool>,
    queue: Vec<usize>,
    /// All `NONE` between uses.
    scratch: Vec<usize>,
}

impl State<'_> {
    fn slack(&self, k: usize) -> i64 {
        let (i, j, w) = self.edges[k];
        self.dualvar[i] + self.dualvar[j] - 2 * w
    }

    fn neighbours(&self, v: usize) -> std::ops::Range<usize> {
        self.neighoff[v]..self.neighoff[v + 1]
    }

    fn leaves(&self, b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.push_leaves(b, &mut out);
        out
    }

    fn push_leaves(&self, b: usize, out: &mut Vec<usize>) {
        if b < self.n {
            out.push(b);
            return;
        }
        for &t in &self.blossomchilds[b] {
            self.push_leaves(t, out);
        }
    }

    fn assign_label(&mut self, w: usize, t: u8, p: usize) {
        let mut w = w;
        let mut t = t;
        let mut p = p;
        loop {
            let b = self.inblossom[w];
            debug_assert!(self.label[w] == 0 && self.label[b] == 0);
            self.label[w] = t;
            self.label[b] = t;
            self.labelend[w] = p;
            self.labelend[b] = p;
            self.bestedge[w] = NONE;
            self.bestedge[b] = NONE;
            if t == 1 {
                let mut queue = std::mem::take(&mut self.queue);
                self.push_leaves(b, &mut queue);
                self.queue = queue;
                return;
            }
            let base = self.blossombase[b];
            debug_assert!(self.mate[base] != NONE);
            let m = self.mate[base];
            w = self.endpoint[m];
            t = 1;
            p = m ^ 1;
        }
    }

    fn scan_blossom(&mut self, v: usize, w: usize) -> usize {
        let mut path = Vec::new();
        let mut base = NONE;
        let (mut v, mut w) = (v, w);
        while v != NONE || w != NONE {
            let mut b = self.inblossom[v];
            if self.label[b] & 4 != 0 {
                base = self.blossombase[b];
                break;
            }
            debug_assert_eq!(self.label[b], 1);
            path.push(b);
            self.label[b] = 5;
            if self.labelend[b] == NONE {
                v = NONE;
            } else {
                v = self.endpoint[self.labelend[b]];
                b = self.inblossom[v];
                debug_assert_eq!(self.label[b], 2);
                v = self.endpoint[self.labelend[b]];
            }
            if w != NONE {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = 1;
        }
        base
    }

    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];
        let b = self.unusedblossoms.pop().expect("blossom pool exhausted");
        self.blossombase[b] = base;
        self.blossomparent[b] = NONE;
        self.blossomparent[bb] = b;
        let mut path = Vec::new();
        let mut endps = Vec::new();
        while bv != bb {
            self.blossomparent[bv] = b;
            path.push(bv);
            endps.push(self.labelend[bv]);
            v = self.endpoint[self.labelend[bv]];
            bv = self.inblossom[v];
        }
        path.push(bb);
        path.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.blossomparent[bw] = b;
            path.push(bw);
            endps.push(self.labelend[bw] ^ 1);
            w = self.endpoint[self.labelend[bw]];
            bw = self.inblossom[w];
        }
        debug_assert_eq!(self.label[bb], 1);
        self.label[b] = 1;
        self.labelend[b] = self.labelend[bb];
        self.dualvar[b] = 0;
        self.blossomchilds[b] = path.clone();
        self.blossomendps[b] = endps;
        for v in self.leaves(b) {
            if self.label[self.inblossom[v]] == 2 {
                self.queue.push(v);
            }
            self.inblossom[v] = b;
        }
        let mut bestedgeto = std::mem::take(&mut self.scratch);
        for &bv in &path {
            let list: Vec<usize> = match self.blossombestedges[bv].take() {
                Some(list) => list,
                None => self
                    .leaves(bv)
                    .into_iter()
                    .flat_map(|v| self.neighbours(v))
                    .map(|i| self.neighbend[i] / 2)
                    .collect(),
            };
            {
                for k in list {
                    let (i, j, _) = self.edges[k];
                    let j = if self.inblossom[j] == b { i } else { j };
                    let bj = self.inblossom[j];
                    if bj != b
                        && self.label[bj] == 1
                        && (bestedgeto[bj] == NONE || self.slack(k) < self.slack(bestedgeto[bj]))
                    {
                        bestedgeto[bj] = k;
                    }
                }
            }
            self.bestedge[bv] = NONE;
        }
        let mut list = Vec::new();
        for slot in bestedgeto.iter_mut() {
            if *slot != NONE {
                list.push(*slot);
                *slot = NONE;
            }
        }
        self.scratch = bestedgeto;
        let mut best = NONE;
        for &k in &list {
            if best == NONE || self.slack(k) < self.slack(best) {
                best = k;
            }
        }
        self.blossombestedges[b] = Some(list);
        self.bestedge[b] = best;
    }

    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        let childs = self.blossomchilds[b].clone();
        for &s in &childs {
            self.blossomparent[s] = NONE;
            if s < self.n {
                self.inblossom[s] = s;
            } else if endstage && self.dualvar[s] == 0 {
                self.expand_blossom(s, endstage);
            } else {
                for v in self.leaves(s) {
                    self.inblossom[v] = s;
                }
            }
        }
        if !endstage && self.label[b] == 2 {
            let entrychild = self.inblossom[self.endpoint[self.labelend[b] ^ 1]];
            let len = childs.len() as isize;
            let mut j = childs.iter().position(|&c| c == entrychild).unwrap() as isize;
            let (jstep, endptrick): (isize, usize) = if j & 1 == 1 {
                j -= len;
                (1, 0)
            } else {
                (-1, 1)
            };
            let at = |j: isize| ((j % len + len) % len) as usize;
            let endps = self.blossomendps[b].clone();
            let mut p = self.labelend[b];
            while j != 0 {
                let q = self.endpoint[p ^ 1];
                self.label[q] = 0;
                let r = self.endpoint[endps[at(j - endptrick as isize)] ^ endptrick ^ 1];
                self.label[r] = 0;
                self.assign_label(q, 2, p);
                self.allowedge[endps[at(j - endptrick as isize)] / 2] = true;
                j += jstep;
                p = endps[at(j - endptrick as isize)] ^ endptrick;
                self.allowedge[p / 2] = true;
                j += jstep;
            }
            let bv = childs[at(j)];
            let q = self.endpoint[p ^ 1];
            self.label[q] = 2;
            self.label[bv] = 2;
            self.labelend[q] = p;
            self.labelend[bv] = p;
            self.bestedge[bv] = NONE;
            j += jstep;
            while childs[at(j)] != entrychild {
                let bv = childs[at(j)];
                if self.label[bv] == 1 {
                    j += jstep;
                    continue;
                }
                let leaves = self.leaves(bv);
                let found = leaves.iter().copied().find(|&v| self.label[v] != 0);
                if let Some(v) = found {
                    debug_assert_eq!(self.label[v], 2);
                    self.label[v] = 0;
                    let m = self.endpoint[self.mate[self.blossombase[bv]]];
                    self.label[m] = 0;
                    let le = self.labelend[v];
                    self.assign_label(v, 2, le);
                }
                j += jstep;
            }
        }
        self.label[b] = u8::MAX;
        self.labelend[b] = NONE;
        self.blossomchilds[b].clear();
        self.blossomendps[b].clear();
        self.blossombase[b] = NONE;
        self.blossombestedges[b] = None;
        self.bestedge[b] = NONE;
        self.unusedblossoms.push(b);
    }

    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossomparent[t] != b {
            t = self.blossomparent[t];
        }
        if t >= self.n {
            self.augment_blossom(t, v);
        }
        let childs = self.blossomchilds[b].clone();
        let endps = self.blossomendps[b].clone();
        let len = childs.len() as isize;
        let at = |j: isize| ((j % len + len) % len) as usize;
        let i = childs.iter().position(|&c| c == t).unwrap();
        let mut j = i as isize;
        let (jstep, endptrick): (isize, usize) = if i & 1 == 1 {
            j -= len;
            (1, 0)
        } else {
            (-1, 1)
        };
        while j != 0 {
            j += jstep;
            let t = childs[at(j)];
            let p = endps[at(j - endptrick as isize)] ^ endptrick;
            if t >= self.n {
                self.augment_blossom(t, self.endpoint[p]);
            }
            j += jstep;
            let t = childs[at(j)];
            if t >= self.n {
                self.augment_blossom(t, self.endpoint[p ^ 1]);
            }
            self.mate[self.endpoint[p]] = p ^ 1;
            self.mate[self.endpoint[p ^ 1]] = p;
        }
        self.blossomchilds[b].rotate_left(i);
        self.blossomendps[b].rotate_left(i);
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]];
        debug_assert_eq!(self.blossombase[b], v);
    }

    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (s0, p0) in [(v, 2 * k + 1), (w, 2 * k)] {
            let (mut s, mut p) = (s0, p0);
            loop {
                let bs = self.inblossom[s];
                debug_assert_eq!(self.label[bs], 1);
                if bs >= self.n {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p;
                if self.labelend[bs] == NONE {
                    break;
                }
                let t = self.endpoint[self.labelend[bs]];
                let bt = self.inblossom[t];
                debug_assert_eq!(self.label[bt], 2);
                s = self.endpoint[self.labelend[bt]];
                let j = self.endpoint[self.labelend[bt] ^ 1];
                if bt >= self.n {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.labelend[bt];
                p = self.labelend[bt] ^ 1;
            }
        }
    }
}

/// Maximum-weight matching; with `max_cardinality` only maximum-cardinality
/// matchings are considered. Returns the mate of every vertex.
pub fn max_weight_matching(
    n: usize,
    edges: &[(usize, usize, i64)],
    max_cardinality: bool,
) -> Vec<Option<usize>> {
    if edges.is_empty() || n == 0 {
        return vec![None; n];
    }
    let maxweight = edges.iter().map(|e| e.2).max().unwrap().max(0);
    run(n, edges, max_cardinality, vec![maxweight; n], vec![NONE; n])
}

/// Minimum-weight perfect matching, or `None` if the graph has none.
///
/// Weights are negated and doubled; every vertex starts with its best
/// incident weight as dual and mutually best edges start matched. Free
/// vertices may hold different duals because perfect matchings leave no
/// vertex exposed, and doubling keeps all duals even so slacks between
/// outer vertices stay even.
pub fn min_weight_perfect_matching(n: usize, edges: &[(usize, usize, i64)]) -> Option<Vec<usize>> {
    if n == 0 {
        return Some(Vec::new());
    }
    let top = edges.iter().map(|e| e.2).max()? + 1;
    let flipped: Vec<(usize, usize, i64)> = edges.iter().map(|&(a, b, w)| (a, b, 2 * (top - w))).collect();
    let mut dual = vec![0i64; n];
    for &(a, b, w) in &flipped {
        dual[a] = dual[a].max(w);
        dual[b] = dual[b].max(w);
    }
    let mut mate = vec![NONE; n];
    for (k, &(a, b, w)) in flipped.iter().enumerate() {
        if mate[a] == NONE && mate[b] == NONE && dual[a] == w && dual[b] == w {
            mate[a] = 2 * k + 1;
            mate[b] = 2 * k;
        }
    }
    // Lower each remaining free dual until an edge goes tight, and take the
    // edge if its other end is free too.
    let (off, ends) = adjacency(n, &flipped);
    for v in 0..n {
        if mate[v] != NONE {
            continue;
        }
        let mut best: Option<(i64, usize, usize)> = None;
        for &p in &ends[off[v]..off[v + 1]] {
            let k = p / 2;
            let (a, b, w) = flipped[k];
            let u = if a == v { b } else { a };
            let need = 2 * w - dual[u];
            let free = mate[u] == NONE;
            if best.is_none_or(|(x, _, f)| need > x || (need == x && free && f == NONE)) {
                best = Some((need, k, if free { NONE } else { u }));
            }
        }
        if let Some((need, k, taken)) = best {
            dual[v] = need;
            if taken == NONE {
                let (a, _, _) = flipped[k];
                let (p_v, p_u) = if a == v { (2 * k + 1, 2 * k) } else { (2 * k, 2 * k + 1) };
                let u = flipped[k].0 + flipped[k].1 - v;
                mate[v] = p_v;
                mate[u] = p_u;
            }
        }
    }
    let out = run(n, &flipped, true, dual, mate);
    out.into_iter().collect()
}

/// Offsets and remote endpoint ids (`2k + 1` at `i`, `2k` at `j`) of
/// every vertex's edges.
fn adjacency(n: usize, edges: &[(usize, usize, i64)]) -> (Vec<usize>, Vec<usize>) {
    let mut off = vec![0usize; n + 1];
    for &(i, j, _) in edges {
        off[i + 1] += 1;
        off[j + 1] += 1;
    }
    for v in 0..n {
        off[v + 1] += off[v];
    }
    let mut fill = off.clone();
    let mut ends = vec![0usize; 2 * edges.len()];
    for (k, &(i, j, _)) in edges.iter().enumerate() {
        ends[fill[i]] = 2 * k + 1;
        fill[i] += 1;
        ends[fill[j]] = 2 * k;
        fill[j] += 1;
    }
    (off, ends)
}

fn run(
    n: usize,
    edges: &[(usize, usize, i64)],
    max_cardinality: bool,
    dual: Vec<i64>,
    mate: Vec<usize>,
) -> Vec<Option<usize>> {
    let mut endpoint = Vec::with_capacity(2 * edges.len());
    for &(i, j, _) in edges {
        debug_assert!(i != j && i < n && j < n);
        endpoint.push(i);
        endpoint.push(j);
    }
    let (neighoff, neighbend) = adjacency(n, edges);
    let mut s = State {
        n,
        edges,
        endpoint,
        neighoff,
        neighbend,
        mate,
        label: vec![0; 2 * n],
        labelend: vec![NONE; 2 * n],
        inblossom: (0..n).collect(),
        blossomparent: vec![NONE; 2 * n],
        blossomchilds: vec![Vec::new(); 2 * n],
        blossombase: (0..n).chain(std::iter::repeat_n(NONE, n)).collect(),
        blossomendps: vec![Vec::new(); 2 * n],
        bestedge: vec![NONE; 2 * n],
        blossombestedges: vec![None; 2 * n],
        unusedblossoms: (n..2 * n).rev().collect(),
        dualvar: dual.into_iter().chain(std::iter::repeat_n(0, n)).collect(),
        allowedge: vec![false; edges.len()],
        queue: Vec::new(),
        scratch: vec![NONE; 2 * n],
    };

    for _ in 0..n {
        s.label.iter_mut().for_each(|l| *l = 0);
        s.bestedge.iter_mut().for_each(|b| *b = NONE);
        for b in n..2 * n {
            s.blossombestedges[b] = None;
        }
        s.allowedge.iter_mut().for_each(|a| *a = false);
        s.queue.clear();
        for v in 0..n {
            if s.mate[v] == NONE && s.label[s.inblossom[v]] == 0 {
                s.assign_label(v, 1, NONE);
            }
        }
        let mut augmented = false;
        loop {
            while let Some(v) = s.queue.pop() {
                debug_assert_eq!(s.label[s.inblossom[v]], 1);
                for idx in s.neighbours(v) {
                    let p = s.neighbend[idx];
                    let k = p / 2;
                    let w = s.endpoint[p];
                    if s.inblossom[v] == s.inblossom[w] {
                        continue;
                    }
                    let mut kslack = 0;
                    if !s.allowedge[k] {
                        kslack = s.slack(k);
                        if kslack <= 0 {
                            s.allowedge[k] = true;
                        }
                    }
                    if s.allowedge[k] {
                        if s.label[s.inblossom[w]] == 0 {
                            s.assign_label(w, 2, p ^ 1);
                        } else if s.label[s.inblossom[w]] == 1 {
                            let base = s.scan_blossom(v, w);
                            if base != NONE {
                                s.add_blossom(base, k);
                            } else {
                                s.augment_matching(k);
                                augmented = true;
                                break;
                            }
                        } else if s.label[w] == 0 {
                            s.label[w] = 2;
                            s.labelend[w] = p ^ 1;
                        }
                    } else if s.label[s.inblossom[w]] == 1 {
                        let b = s.inblossom[v];
                        if s.bestedge[b] == NONE || kslack < s.slack(s.bestedge[b]) {
                            s.bestedge[b] = k;
                        }
                    } else if s.label[w] == 0
                        && (s.bestedge[w] == NONE || kslack < s.slack(s.bestedge[w]))
                    {
                        s.bestedge[w] = k;
                    }
                }
                if augmented {
                    break;
                }
            }
            if augmented {
                break;
            }

            let mut deltatype = 0u8;
            let mut delta = 0i64;
            let mut deltaedge = NONE;
            let mut deltablossom = NONE;
            if !max_cardinality {
                deltatype = 1;
                delta = s.dualvar[..n].iter().copied().min().unwrap();
            }
            for v in 0..n {
                if s.label[s.inblossom[v]] == 0 && s.bestedge[v] != NONE {
                    let d = s.slack(s.bestedge[v]);
                    if deltatype == 0 || d < delta {
                        delta = d;
                        deltatype = 2;
                        deltaedge = s.bestedge[v];
                    }
                }
            }
            for b in 0..2 * n {
                if s.blossomparent[b] == NONE && s.label[b] == 1 && s.bestedge[b] != NONE {
                    let kslack = s.slack(s.bestedge[b]);
                    debug_assert_eq!(kslack % 2, 0);
                    let d = kslack / 2;
                    if deltatype == 0 || d < delta {
                        delta = d;
                        deltatype = 3;
                        deltaedge = s.bestedge[b];
                    }
                }
            }
            for b in n..2 * n {
                if s.blossombase[b] != NONE
                    && s.blossomparent[b] == NONE
                    && s.label[b] == 2
                    && (deltatype == 0 || s.dualvar[b] < delta)
                {
                    delta = s.dualvar[b];
                    deltatype = 4;
                    deltablossom = b;
                }
            }
            if deltatype == 0 {
                deltatype = 1;
                delta = s.dualvar[..n].iter().copied().min().unwrap().max(0);
            }
            for v in 0..n {
                match s.label[s.inblossom[v]] {
                    1 => s.dualvar[v] -= delta,
                    2 => s.dualvar[v] += delta,
                    _ => {}
                }
            }
            for b in n..2 * n {
                if s.blossombase[b] != NONE && s.blossomparent[b] == NONE {
                    match s.label[b] {
                        1 => s.dualvar[b] += delta,
                        2 => s.dualvar[b] -= delta,
                        _ => {}
                    }
                }
            }
            match deltatype {
                1 => break,
                2 => {
                    s.allowedge[deltaedge] = true;
                    let (mut i, j, _) = s.edges[deltaedge];
                    if s.label[s.inblossom[i]] == 0 {
                        i = j;
                    }
                    s.queue.push(i);
                }
                3 => {
                    s.allowedge[deltaedge] = true;
                    let (i, _, _) = s.edges[deltaedge];
                    s.queue.push(i);
                }
                _ => s.expand_blossom(deltablossom, false),
            }
        }
        if !augmented {
            break;
        }
        for b in n..2 * n {
            if s.blossomparent[b] == NONE
                && s.blossombase[b] != NONE
                && s.label[b] == 1
                && s.dualvar[b] == 0
            {
                s.expand_blossom(b, true);
            }
        }
    }
    s.mate
        .iter()
        .map(|&m| (m != NONE).then(|| s.endpoint[m]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(max_weight_matching(2, &[(0, 1, 1)], false), vec![Some(1), Some(0)]);
        let m = max_weight_matching(4, &[(0, 1, 5), (1, 2, 11), (2, 3, 5)], false);
        assert_eq!(m, vec![None, Some(2), Some(1), None]);
        let m = max_weight_matching(4, &[(0, 1, 5), (1, 2, 11), (2, 3, 5)], true);
        assert_eq!(m, vec![Some(1), Some(0), Some(3), Some(2)]);
    }

    /// Cheapest perfect matching by recursion over the lowest free vertex.
    fn brute_perfect(n: usize, w: &[Vec<Option<i64>>]) -> Option<i64> {
        fn go(free: &mut Vec<bool>, w: &[Vec<Option<i64>>]) -> Option<i64> {
            let Some(i) = free.iter().position(|&f| f) else {
                return Some(0);
            };
            free[i] = false;
            let mut best: Option<i64> = None;
            for j in i + 1..free.len() {
                if let (true, Some(x)) = (free[j], w[i][j]) {
                    free[j] = false;
                    if let Some(rest) = go(free, w) {
                        best = Some(best.map_or(x + rest, |b: i64| b.min(x + rest)));
                    }
                    free[j] = true;
                }
            }
            free[i] = true;
            best
        }
        go(&mut vec![true; n], w)
    }

    #[test]
    fn perfect_matching_matches_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for case in 0..400 {
            let n = 2 * rng.gen_range(1..=5);
            let mut w = vec![vec![None; n]; n];
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(0.6) {
                        // few distinct weights to provoke ties and blossoms
                        let x = rng.gen_range(1..6) * if case % 2 == 0 { 1 } else { 1000 };
                        w[i][j] = Some(x);
                        w[j][i] = Some(x);
                        edges.push((i, j, x));
                    }
                }
            }
            let want = brute_perfect(n, &w);
            let got = min_weight_perfect_matching(n, &edges);
            match (want, got) {
                (None, None) => {}
                (Some(want), Some(mate)) => {
                    let mut total = 0;
                    for i in 0..n {
                        assert_eq!(mate[mate[i]], i);
                        if i < mate[i] {
                            total += w[i][mate[i]].expect("matched along an edge");
                        }
                    }
                    assert_eq!(total, want, "case {case}: {edges:?}");
                }
                (a, b) => panic!("case {case}: {a:?} vs {b:?} for {edges:?}"),
            }
        }
    }

    #[test]
    fn blossom_cases() {
        // S-blossom and relabeling
        let m = max_weight_matching(4, &[(0, 1, 8), (0, 2, 9), (1, 2, 10), (2, 3, 7)], false);
        assert_eq!(m, vec![Some(1), Some(0), Some(3), Some(2)]);
        // nested S-blossom, expand
        let e = [(1, 2, 19), (1, 3, 20), (1, 8, 8), (2, 3, 25), (2, 4, 18), (3, 5, 18), (4, 5, 13), (4, 7, 7), (5, 6, 7)];
        let m = max_weight_matching(9, &e, false);
        assert_eq!(m, vec![None, Some(8), Some(3), Some(2), Some(7), Some(6), Some(5), Some(4), Some(1)]);
        // T-blossom expansion with augmentation through it
        let e = [(1, 2, 45), (1, 5, 45), (2, 3, 50), (3, 4, 45), (4, 5, 50), (1, 6, 30), (3, 9, 35), (4, 8, 26), (5, 7, 40), (9, 10, 5)];
        let m = max_weight_matching(11, &e, false);
        assert_eq!(
            m,
            vec![None, Some(6), Some(3), Some(2), Some(8), Some(7), Some(1), Some(5), Some(4), Some(10), Some(9)]
        );
    }
}
