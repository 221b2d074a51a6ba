//! Small dense max-flow solver (shortest-augmenting-path style) used by the
//! feasibility checks. Capacities are nonnegative reals; `+∞` is allowed on
//! interior arcs as long as every source→sink path crosses a finite arc.

/// Residual capacity below this is treated as zero when searching for
/// augmenting paths.
const RESIDUAL_EPS: f64 = 1e-11;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: f64,
    flow: f64,
}

/// A directed flow network over nodes `0..n`.
#[derive(Debug, Clone)]
pub(crate) struct FlowNetwork {
    /// Forward/backward arc pairs: arc `2k+1` is the reverse of arc `2k`.
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: f64) {
        debug_assert!(cap >= 0.0);
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap, flow: 0.0 });
        self.arcs.push(Arc {
            to: from,
            cap: 0.0,
            flow: 0.0,
        });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
    }

    fn residual(&self, arc: usize) -> f64 {
        let a = &self.arcs[arc];
        // The reverse arc's residual is the forward flow.
        if arc.is_multiple_of(2) {
            a.cap - a.flow
        } else {
            self.arcs[arc ^ 1].flow
        }
    }

    fn push(&mut self, arc: usize, amount: f64) {
        let fwd = arc & !1;
        if arc.is_multiple_of(2) {
            self.arcs[fwd].flow += amount;
            // Snap to the capacity when the augmentation was meant to
            // saturate the arc; keeps each round strictly productive.
            let (cap, flow) = (self.arcs[fwd].cap, self.arcs[fwd].flow);
            if cap.is_finite() && cap - flow < 1e-12 * (1.0 + cap) {
                self.arcs[fwd].flow = cap;
            }
        } else {
            self.arcs[fwd].flow -= amount;
            if self.arcs[fwd].flow < 1e-12 * (1.0 + self.arcs[fwd].cap) {
                self.arcs[fwd].flow = self.arcs[fwd].flow.max(0.0);
            }
        }
    }

    /// Breadth-first search for a shortest residual path; returns the
    /// entering arc per visited node.
    fn bfs(&self, source: usize, target: usize) -> Option<Vec<usize>> {
        let mut pred = vec![usize::MAX; self.adj.len()];
        let mut queue = std::collections::VecDeque::from([source]);
        pred[source] = usize::MAX - 1;
        while let Some(v) = queue.pop_front() {
            for &arc in &self.adj[v] {
                let w = self.arcs[arc].to;
                if pred[w] == usize::MAX && self.residual(arc) > RESIDUAL_EPS {
                    pred[w] = arc;
                    if w == target {
                        return Some(pred);
                    }
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Run to optimality and return the max-flow value.
    pub fn max_flow(&mut self, source: usize, target: usize) -> f64 {
        let mut total = 0.0;
        while let Some(pred) = self.bfs(source, target) {
            let mut bottleneck = f64::INFINITY;
            let mut v = target;
            while v != source {
                let arc = pred[v];
                bottleneck = bottleneck.min(self.residual(arc));
                v = self.arcs[arc ^ 1].to;
            }
            debug_assert!(bottleneck.is_finite() && bottleneck > 0.0);
            let mut v = target;
            while v != source {
                let arc = pred[v];
                self.push(arc, bottleneck);
                v = self.arcs[arc ^ 1].to;
            }
            total += bottleneck;
        }
        total
    }

    /// Nodes reachable from `source` in the residual graph — the source
    /// side of a minimum cut once [`FlowNetwork::max_flow`] has run.
    pub fn residual_reachable(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        let mut queue = std::collections::VecDeque::from([source]);
        seen[source] = true;
        while let Some(v) = queue.pop_front() {
            for &arc in &self.adj[v] {
                let w = self.arcs[arc].to;
                if !seen[w] && self.residual(arc) > RESIDUAL_EPS {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_path_network() {
        // s=0, a=1, b=2, t=3.
        let mut net = FlowNetwork::new(4);
        net.add_arc(0, 1, 3.0);
        net.add_arc(0, 2, 2.0);
        net.add_arc(1, 2, 1.0);
        net.add_arc(1, 3, 2.0);
        net.add_arc(2, 3, 3.0);
        assert_abs_diff_eq!(net.max_flow(0, 3), 5.0, epsilon = 1e-12);
        let reach = net.residual_reachable(0);
        assert_eq!(
            reach,
            vec![true, false, false, false],
            "source arcs form the cut"
        );
    }

    #[test]
    fn infinite_interior_arc() {
        let mut net = FlowNetwork::new(4);
        net.add_arc(0, 1, 1.5);
        net.add_arc(1, 2, f64::INFINITY);
        net.add_arc(2, 3, 0.7);
        assert_abs_diff_eq!(net.max_flow(0, 3), 0.7, epsilon = 1e-12);
        let reach = net.residual_reachable(0);
        assert_eq!(
            reach,
            vec![true, true, true, false],
            "cut sits at the sink arc"
        );
    }

    #[test]
    fn diamond_with_cross_arc() {
        let mut net = FlowNetwork::new(4);
        net.add_arc(0, 1, 10.0);
        net.add_arc(0, 2, 10.0);
        net.add_arc(1, 3, 10.0);
        net.add_arc(2, 3, 10.0);
        net.add_arc(1, 2, 10.0);
        assert_abs_diff_eq!(net.max_flow(0, 3), 20.0, epsilon = 1e-12);
    }

    #[test]
    fn irrational_capacities_terminate_and_match_cut() {
        use std::f64::consts::{E, PI, SQRT_2};
        let mut net = FlowNetwork::new(5);
        net.add_arc(0, 1, PI);
        net.add_arc(0, 2, E);
        net.add_arc(1, 3, SQRT_2);
        net.add_arc(1, 2, 1.0);
        net.add_arc(2, 3, PI / 3.0);
        net.add_arc(3, 4, 10.0);
        net.add_arc(2, 4, 0.25);
        // Cut {0,1,2}: √2 + π/3 + 0.25.
        let expected = SQRT_2 + PI / 3.0 + 0.25;
        assert_abs_diff_eq!(net.max_flow(0, 4), expected, epsilon = 1e-12);
    }

    #[test]
    fn disconnected_sink_gets_zero_flow() {
        let mut net = FlowNetwork::new(3);
        net.add_arc(0, 1, 4.0);
        assert_abs_diff_eq!(net.max_flow(0, 2), 0.0, epsilon = 0.0);
        let reach = net.residual_reachable(0);
        assert!(reach[0] && reach[1] && !reach[2]);
    }
}
