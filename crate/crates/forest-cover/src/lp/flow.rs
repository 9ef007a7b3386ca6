//! Maximum flow / minimum cut on small directed networks.
//!
//! Edmonds–Karp: breadth-first augmenting paths, whose O(V·E) augmentation
//! bound does not depend on capacities, so real-valued capacities (including
//! infinite arcs) terminate. The separation oracle reads the minimum cut off
//! the residual graph after the flow is maximal.

const EPS: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct FlowNetwork {
    arcs_from: Vec<Vec<usize>>,
    to: Vec<usize>,
    residual: Vec<f64>,
    capacity: Vec<f64>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            arcs_from: vec![Vec::new(); nodes],
            to: Vec::new(),
            residual: Vec::new(),
            capacity: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.arcs_from.len()
    }

    /// Directed arc with the given capacity; the paired reverse arc starts
    /// at zero capacity. `f64::INFINITY` is allowed.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: f64) {
        debug_assert!(cap >= 0.0);
        let id = self.to.len();
        self.arcs_from[from].push(id);
        self.to.push(to);
        self.residual.push(cap);
        self.capacity.push(cap);
        self.arcs_from[to].push(id + 1);
        self.to.push(from);
        self.residual.push(0.0);
        self.capacity.push(0.0);
    }

    /// Runs Edmonds–Karp and returns the max-flow value.
    pub fn max_flow(&mut self, source: usize, sink: usize) -> f64 {
        let n = self.node_count();
        let mut total = 0.0;
        let mut pred: Vec<Option<usize>> = vec![None; n];
        loop {
            for p in pred.iter_mut() {
                *p = None;
            }
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(source);
            'bfs: while let Some(u) = queue.pop_front() {
                for &a in &self.arcs_from[u] {
                    let v = self.to[a];
                    if v != source && pred[v].is_none() && self.residual[a] > EPS {
                        pred[v] = Some(a);
                        if v == sink {
                            break 'bfs;
                        }
                        queue.push_back(v);
                    }
                }
            }
            if pred[sink].is_none() {
                return total;
            }
            let mut bottleneck = f64::INFINITY;
            let mut v = sink;
            while v != source {
                let a = pred[v].unwrap();
                bottleneck = bottleneck.min(self.residual[a]);
                v = self.to[a ^ 1];
            }
            let mut v = sink;
            while v != source {
                let a = pred[v].unwrap();
                self.residual[a] -= bottleneck;
                self.residual[a ^ 1] += bottleneck;
                v = self.to[a ^ 1];
            }
            total += bottleneck;
        }
    }

    /// Nodes reachable from `source` in the residual graph. After
    /// [`max_flow`](Self::max_flow) this is the source side of a minimum cut.
    pub fn source_side(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        seen[source] = true;
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.arcs_from[u] {
                let v = self.to[a];
                if !seen[v] && self.residual[a] > EPS {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Total original capacity of arcs leaving `side`. Equal to the max-flow
    /// value when `side` is a minimum cut (strong duality).
    pub fn cut_capacity(&self, side: &[bool]) -> f64 {
        let mut cap = 0.0;
        for u in 0..self.node_count() {
            if !side[u] {
                continue;
            }
            for &a in &self.arcs_from[u] {
                if a % 2 == 0 && !side[self.to[a]] {
                    cap += self.capacity[a];
                }
            }
        }
        cap
    }
}
