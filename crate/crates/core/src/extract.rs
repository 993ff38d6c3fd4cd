//! Curve extraction from the fitted EDT region: a net of region points, its
//! minimum spanning tree, max-min-path endpoint estimation, the shortest path
//! between the endpoints, and a relaxation pass that pulls the path toward the
//! region's centerline. Open, closed, and topology-agnostic variants.

use crate::edt::EdtEstimate;
use crate::error::{Error, Result};
use crate::geom::{winding_number, Point2, PointGrid, Polyline};
use serde::{Deserialize, Serialize};
use std::collections::BinaryHeap;

/// Geometric graph over net nodes.
#[derive(Debug, Clone)]
pub struct NetGraph {
    pub nodes: Vec<Point2>,
    /// Undirected edges `(u, v, weight)` with `u < v`.
    pub edges: Vec<(u32, u32, f64)>,
    adj: Vec<Vec<(u32, f64)>>,
    pub xi: f64,
}

impl NetGraph {
    pub fn adjacency(&self) -> &[Vec<(u32, f64)>] {
        &self.adj
    }

    pub fn from_parts(nodes: Vec<Point2>, mut edges: Vec<(u32, u32, f64)>) -> Self {
        for e in &mut edges {
            if e.0 > e.1 {
                std::mem::swap(&mut e.0, &mut e.1);
            }
        }
        edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        edges.dedup_by_key(|e| (e.0, e.1));
        let mut adj = vec![Vec::new(); nodes.len()];
        for &(u, v, w) in &edges {
            adj[u as usize].push((v, w));
            adj[v as usize].push((u, w));
        }
        Self {
            nodes,
            edges,
            adj,
            xi: 0.0,
        }
    }
}

/// Greedy net over a point list: scan in order, keep points at least `xi`
/// from every kept point, connect pairs within `connect_radius`.
pub fn net_from_points(points: &[Point2], xi: f64, connect_radius: f64) -> Result<NetGraph> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    if !(xi > 0.0) {
        return Err(Error::InvalidInput("xi must be positive".into()));
    }
    // Incremental occupancy hash over kept nodes (cell = xi, so a conflict is
    // always within the 3x3 neighborhood).
    let mut kept: Vec<Point2> = Vec::new();
    let mut cells: std::collections::HashMap<(i64, i64), Vec<u32>> = std::collections::HashMap::new();
    let key = |p: Point2| ((p.x / xi).floor() as i64, (p.y / xi).floor() as i64);
    for &p in points {
        let (cx, cy) = key(p);
        let mut ok = true;
        'scan: for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = cells.get(&(cx + dx, cy + dy)) {
                    for &i in ids {
                        if kept[i as usize].dist(p) < xi {
                            ok = false;
                            break 'scan;
                        }
                    }
                }
            }
        }
        if ok {
            cells.entry((cx, cy)).or_default().push(kept.len() as u32);
            kept.push(p);
        }
    }

    let grid = PointGrid::with_cell(kept.clone(), connect_radius.max(xi));
    let mut edges = Vec::new();
    for (i, p) in kept.iter().enumerate() {
        grid.for_each_within(*p, connect_radius, |j, d| {
            if j > i {
                edges.push((i as u32, j as u32, d));
            }
        });
    }
    let mut adj = vec![Vec::new(); kept.len()];
    for &(u, v, w) in &edges {
        adj[u as usize].push((v, w));
        adj[v as usize].push((u, w));
    }
    Ok(NetGraph {
        nodes: kept,
        edges,
        adj,
        xi,
    })
}

/// Net over the EDT region at spacing `xi` (must satisfy `0 < xi < eps/4`);
/// pairs within `2.5 * xi` are connected.
pub fn build_net(region: &EdtEstimate, xi: f64) -> Result<NetGraph> {
    if !(xi > 0.0 && xi < region.epsilon / 4.0) {
        return Err(Error::InvalidInput(format!(
            "xi must lie in (0, eps/4) = (0, {}), got {xi}",
            region.epsilon / 4.0
        )));
    }
    net_from_points(&region.region_points, xi, 2.5 * xi)
}

/// Minimum spanning tree with deterministic `(weight, u, v)` tie-breaking,
/// rooted at node 0, with binary-lifting ancestors for O(1) path lengths.
#[derive(Debug, Clone)]
pub struct SpanningTree {
    pub edges: Vec<(u32, u32, f64)>,
    adj: Vec<Vec<(u32, f64)>>,
    depth: Vec<u32>,
    dist: Vec<f64>,
    up: Vec<Vec<u32>>,
}

impl SpanningTree {
    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn adjacency(&self) -> &[Vec<(u32, f64)>] {
        &self.adj
    }

    fn lca(&self, mut a: u32, mut b: u32) -> u32 {
        if self.depth[a as usize] < self.depth[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        let levels = self.up.len();
        let diff = self.depth[a as usize] - self.depth[b as usize];
        for k in 0..levels {
            if diff & (1 << k) != 0 {
                a = self.up[k][a as usize];
            }
        }
        if a == b {
            return a;
        }
        for k in (0..levels).rev() {
            if self.up[k][a as usize] != self.up[k][b as usize] {
                a = self.up[k][a as usize];
                b = self.up[k][b as usize];
            }
        }
        self.up[0][a as usize]
    }

    /// Weighted length of the unique tree path between two nodes.
    pub fn path_length(&self, a: usize, b: usize) -> f64 {
        let l = self.lca(a as u32, b as u32) as usize;
        self.dist[a] + self.dist[b] - 2.0 * self.dist[l]
    }

    /// The unique tree path between two nodes, as node indices.
    pub fn path(&self, a: usize, b: usize) -> Vec<u32> {
        let l = self.lca(a as u32, b as u32);
        let climb = |mut x: u32| {
            let mut out = Vec::new();
            while x != l {
                out.push(x);
                x = self.up[0][x as usize];
            }
            out
        };
        let mut left = climb(a as u32);
        left.push(l);
        let right = climb(b as u32);
        left.extend(right.into_iter().rev());
        left
    }

    /// Farthest node from `start` by tree distance (smallest index wins ties).
    pub fn farthest_from(&self, start: usize) -> (usize, f64) {
        let n = self.adj.len();
        let mut dist = vec![f64::NEG_INFINITY; n];
        dist[start] = 0.0;
        let mut stack = vec![start as u32];
        while let Some(v) = stack.pop() {
            for &(u, w) in &self.adj[v as usize] {
                if dist[u as usize] == f64::NEG_INFINITY {
                    dist[u as usize] = dist[v as usize] + w;
                    stack.push(u);
                }
            }
        }
        let mut best = (start, 0.0f64);
        for (i, &d) in dist.iter().enumerate() {
            if d > best.1 {
                best = (i, d);
            }
        }
        best
    }
}

/// Kruskal MST; errors when the graph is disconnected (a sign that xi or
/// epsilon is mis-set).
pub fn mst(graph: &NetGraph) -> Result<SpanningTree> {
    let n = graph.nodes.len();
    let mut order: Vec<usize> = (0..graph.edges.len()).collect();
    order.sort_by(|&i, &j| {
        let a = &graph.edges[i];
        let b = &graph.edges[j];
        a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1))
    });
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], i: u32) -> u32 {
        let mut root = i;
        while parent[root as usize] != root {
            root = parent[root as usize];
        }
        let mut cur = i;
        while parent[cur as usize] != root {
            let next = parent[cur as usize];
            parent[cur as usize] = root;
            cur = next;
        }
        root
    }
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for i in order {
        let (u, v, w) = graph.edges[i];
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru as usize] = rv;
            edges.push((u, v, w));
        }
    }
    if n > 0 && edges.len() + 1 != n {
        let mut roots = std::collections::HashSet::new();
        for i in 0..n as u32 {
            roots.insert(find(&mut parent, i));
        }
        return Err(Error::NetNotConnected(roots.len()));
    }

    let mut adj = vec![Vec::new(); n];
    for &(u, v, w) in &edges {
        adj[u as usize].push((v, w));
        adj[v as usize].push((u, w));
    }
    // Root at 0: parents, depths, weighted distances.
    let mut up0 = vec![0u32; n];
    let mut depth = vec![0u32; n];
    let mut dist = vec![0.0f64; n];
    let mut seen = vec![false; n];
    if n > 0 {
        seen[0] = true;
        let mut stack = vec![0u32];
        while let Some(v) = stack.pop() {
            for &(u, w) in &adj[v as usize] {
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    up0[u as usize] = v;
                    depth[u as usize] = depth[v as usize] + 1;
                    dist[u as usize] = dist[v as usize] + w;
                    stack.push(u);
                }
            }
        }
    }
    let levels = (usize::BITS - n.max(2).leading_zeros()) as usize;
    let mut up = vec![up0];
    for k in 1..levels {
        let prev = &up[k - 1];
        let next: Vec<u32> = (0..n).map(|i| prev[prev[i] as usize]).collect();
        up.push(next);
    }
    Ok(SpanningTree {
        edges,
        adj,
        depth,
        dist,
        up,
    })
}

/// Endpoint estimation: the pair of nodes maximizing the tree path length,
/// optionally constrained to predicate sets. Unconstrained pairs come from a
/// double sweep (exact tree diameter); constrained pairs from an exhaustive
/// scan over the candidate sets with O(1) path lengths.
pub fn max_min_endpoints(
    tree: &SpanningTree,
    nodes: &[Point2],
    e0: Option<&dyn Fn(Point2) -> bool>,
    e1: Option<&dyn Fn(Point2) -> bool>,
) -> Result<(usize, usize)> {
    if nodes.len() < 2 {
        return Err(Error::InvalidInput(
            "endpoint estimation needs at least 2 nodes".into(),
        ));
    }
    match (e0, e1) {
        (None, None) => {
            let (a, _) = tree.farthest_from(0);
            let (b, _) = tree.farthest_from(a);
            Ok((a.min(b), a.max(b)))
        }
        _ => {
            let set = |pred: Option<&dyn Fn(Point2) -> bool>| -> Vec<usize> {
                match pred {
                    None => (0..nodes.len()).collect(),
                    Some(f) => (0..nodes.len()).filter(|&i| f(nodes[i])).collect(),
                }
            };
            let s0 = set(e0);
            let s1 = set(e1);
            if s0.is_empty() || s1.is_empty() {
                return Err(Error::InvalidInput(
                    "endpoint constraint set contains no net nodes".into(),
                ));
            }
            let mut best = (f64::NEG_INFINITY, 0usize, 0usize);
            for &a in &s0 {
                for &b in &s1 {
                    if a == b {
                        continue;
                    }
                    let len = tree.path_length(a, b);
                    if len > best.0 {
                        best = (len, a, b);
                    }
                }
            }
            if best.0 == f64::NEG_INFINITY {
                return Err(Error::InvalidInput(
                    "endpoint constraints admit no pair".into(),
                ));
            }
            Ok((best.1, best.2))
        }
    }
}

/// Optional endpoint refinement by expected hitting times of the random walk
/// on the net: holding one endpoint fixed, hitting times to it are solved by
/// Gauss-Seidel sweeps and the other endpoint moves to the argmax; the roles
/// then alternate, at most `max_alternations` times.
pub fn refine_endpoints_hitting_time(
    graph: &NetGraph,
    mut x0: usize,
    mut x1: usize,
    max_alternations: usize,
) -> (usize, usize) {
    let n = graph.nodes.len();
    let hitting_argmax = |target: usize| -> usize {
        let mut h = vec![0.0f64; n];
        for _ in 0..200 {
            let mut max_change = 0.0f64;
            for v in 0..n {
                if v == target || graph.adj[v].is_empty() {
                    continue;
                }
                let mean: f64 =
                    graph.adj[v].iter().map(|&(u, _)| h[u as usize]).sum::<f64>()
                        / graph.adj[v].len() as f64;
                let next = 1.0 + mean;
                max_change = max_change.max((next - h[v]).abs());
                h[v] = next;
            }
            if max_change < 1e-9 * n as f64 {
                break;
            }
        }
        let mut best = (f64::NEG_INFINITY, target);
        for (v, &hv) in h.iter().enumerate() {
            if v != target && hv > best.0 {
                best = (hv, v);
            }
        }
        best.1
    };
    for _ in 0..max_alternations {
        let next_x1 = hitting_argmax(x0);
        let next_x0 = hitting_argmax(next_x1);
        if next_x0 == x0 && next_x1 == x1 {
            break;
        }
        x0 = next_x0;
        x1 = next_x1;
    }
    (x0, x1)
}

#[derive(Copy, Clone, PartialEq)]
struct HeapEntry {
    cost: f64,
    node: u32,
}
impl Eq for HeapEntry {}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then(other.node.cmp(&self.node))
    }
}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra shortest path over an adjacency list; deterministic tie-breaking
/// by node index.
pub fn dijkstra_path(adj: &[Vec<(u32, f64)>], from: usize, to: usize) -> Result<Vec<u32>> {
    if from == to {
        return Err(Error::InvalidInput(
            "shortest path needs two distinct endpoints".into(),
        ));
    }
    let n = adj.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![u32::MAX; n];
    let mut heap = BinaryHeap::new();
    dist[from] = 0.0;
    heap.push(HeapEntry {
        cost: 0.0,
        node: from as u32,
    });
    while let Some(HeapEntry { cost, node }) = heap.pop() {
        if cost > dist[node as usize] {
            continue;
        }
        if node as usize == to {
            break;
        }
        for &(u, w) in &adj[node as usize] {
            let next = cost + w;
            if next < dist[u as usize] {
                dist[u as usize] = next;
                prev[u as usize] = node;
                heap.push(HeapEntry {
                    cost: next,
                    node: u,
                });
            }
        }
    }
    if dist[to].is_infinite() {
        return Err(Error::InvalidInput("endpoints not connected".into()));
    }
    let mut path = vec![to as u32];
    let mut cur = to as u32;
    while cur as usize != from {
        cur = prev[cur as usize];
        path.push(cur);
    }
    path.reverse();
    Ok(path)
}

/// Shortest path between two nodes of the net (spec operation shape).
pub fn shortest_path(graph: &NetGraph, from: usize, to: usize) -> Result<Polyline> {
    let path = dijkstra_path(&graph.adj, from, to)?;
    Polyline::new(
        path.iter().map(|&i| graph.nodes[i as usize]).collect(),
        false,
    )
}

/// Pull each movable vertex toward the midpoint of its neighbors, bisecting
/// along the segment to the farthest admissible point (8 bisection steps).
/// Stops when the largest vertex displacement falls below `threshold` or
/// after `max_iter` sweeps. Returns the relaxed path and the sweep count.
pub fn relax(
    path: &Polyline,
    member: &dyn Fn(Point2) -> bool,
    threshold: f64,
    max_iter: usize,
) -> (Polyline, usize) {
    let closed = path.is_closed();
    let mut v: Vec<Point2> = path.vertices().to_vec();
    let n = v.len();
    if n < 3 {
        return (path.clone(), 0);
    }
    let mut iterations = 0;
    for _ in 0..max_iter {
        iterations += 1;
        let mut max_move = 0.0f64;
        let range = if closed { 0..n } else { 1..n - 1 };
        for i in range {
            let prev = v[(i + n - 1) % n];
            let next = v[(i + 1) % n];
            let target = (prev + next) * 0.5;
            let current = v[i];
            let moved = if member(target) {
                target
            } else {
                let mut lo = 0.0f64;
                let mut hi = 1.0f64;
                for _ in 0..8 {
                    let mid = 0.5 * (lo + hi);
                    if member(current.lerp(target, mid)) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                current.lerp(target, lo)
            };
            max_move = max_move.max(current.dist(moved));
            v[i] = moved;
        }
        if max_move < threshold {
            break;
        }
    }
    (
        Polyline::new(v, closed).expect("relaxation preserves vertex count"),
        iterations,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtractMode {
    Open,
    Closed,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    Open,
    Closed,
}

/// Extraction tuning; `None` fields fall back to the stated defaults in terms
/// of the region's epsilon.
#[derive(Debug, Clone, Copy)]
pub struct ExtractParams {
    /// Net spacing; default eps/8.
    pub xi: Option<f64>,
    /// Cut dilation; default eps/10.
    pub eta_gap: Option<f64>,
    pub relax: bool,
    /// Relaxation stop threshold; default xi/10.
    pub relax_threshold: Option<f64>,
    pub hitting_time_refinement: bool,
    /// Interior point of the tube hole, for the winding diagnostic.
    pub hole_point: Option<Point2>,
}

impl Default for ExtractParams {
    fn default() -> Self {
        Self {
            xi: None,
            eta_gap: None,
            relax: true,
            relax_threshold: None,
            hitting_time_refinement: false,
            hole_point: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtractDiagnostics {
    pub path_length: f64,
    pub winding: Option<i32>,
    pub relax_iterations: usize,
    pub net_nodes: usize,
}

/// An extracted curve with topology tag and endpoint estimates (open case).
#[derive(Debug, Clone)]
pub struct ExtractedCurve {
    pub path: Polyline,
    pub topology: Topology,
    pub endpoints: Option<(Point2, Point2)>,
    pub diagnostics: ExtractDiagnostics,
}

struct OpenRun {
    node_path: Vec<Point2>,
    endpoints: (Point2, Point2),
    net_nodes: usize,
}

/// Open-curve machinery over an explicit point pool: net, MST, constrained
/// endpoint estimation, tree shortest path.
fn open_run(
    points: &[Point2],
    xi: f64,
    e0: Option<&dyn Fn(Point2) -> bool>,
    e1: Option<&dyn Fn(Point2) -> bool>,
    hitting: bool,
) -> Result<OpenRun> {
    let graph = net_from_points(points, xi, 2.5 * xi)?;
    if graph.nodes.len() < 2 {
        return Err(Error::InvalidInput("net too small to extract a path".into()));
    }
    let tree = mst(&graph)?;
    let (mut a, mut b) = max_min_endpoints(&tree, &graph.nodes, e0, e1)?;
    if hitting && e0.is_none() && e1.is_none() {
        let refined = refine_endpoints_hitting_time(&graph, a, b, 10);
        a = refined.0;
        b = refined.1;
    }
    let path = dijkstra_path(tree.adjacency(), a, b)?;
    Ok(OpenRun {
        node_path: path.iter().map(|&i| graph.nodes[i as usize]).collect(),
        endpoints: (graph.nodes[a], graph.nodes[b]),
        net_nodes: graph.nodes.len(),
    })
}

/// Components of a point set under friends-of-friends linking at `radius`.
fn fof_components(points: &[Point2], radius: f64) -> Vec<u32> {
    let n = points.len();
    let grid = PointGrid::with_cell(points.to_vec(), radius.max(1e-12));
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], i: u32) -> u32 {
        let mut root = i;
        while parent[root as usize] != root {
            root = parent[root as usize];
        }
        let mut cur = i;
        while parent[cur as usize] != root {
            let next = parent[cur as usize];
            parent[cur as usize] = root;
            cur = next;
        }
        root
    }
    for (i, p) in points.iter().enumerate() {
        grid.for_each_within(*p, radius, |j, _| {
            if j > i {
                let (a, b) = (find(&mut parent, i as u32), find(&mut parent, j as u32));
                if a != b {
                    parent[a as usize] = b;
                }
            }
        });
    }
    let mut label = vec![u32::MAX; n];
    let mut count = 0;
    for i in 0..n as u32 {
        let r = find(&mut parent, i);
        if label[r as usize] == u32::MAX {
            label[r as usize] = count;
            count += 1;
        }
        label[i as usize] = label[r as usize];
    }
    label
}

/// Extract a curve from the EDT region. `member` must be the region's exact
/// membership predicate; every output vertex satisfies it.
pub fn extract_curve(
    region: &EdtEstimate,
    member: &dyn Fn(Point2) -> bool,
    mode: ExtractMode,
    params: &ExtractParams,
) -> Result<ExtractedCurve> {
    if region.region_points.is_empty() {
        return Err(Error::EmptyEdtRegion);
    }
    let eps = region.epsilon;
    let xi = params.xi.unwrap_or(eps / 8.0);
    let eta_gap = params.eta_gap.unwrap_or(eps / 10.0);
    let relax_threshold = params.relax_threshold.unwrap_or(xi / 10.0);

    match mode {
        ExtractMode::Open => {
            let run = open_run(
                &region.region_points,
                xi,
                None,
                None,
                params.hitting_time_refinement,
            )?;
            let path = Polyline::new(run.node_path, false)?;
            let (path, iters) = if params.relax {
                relax(&path, member, relax_threshold, 200)
            } else {
                (path, 0)
            };
            Ok(ExtractedCurve {
                topology: Topology::Open,
                endpoints: Some(run.endpoints),
                diagnostics: ExtractDiagnostics {
                    path_length: path.length(),
                    winding: None,
                    relax_iterations: iters,
                    net_nodes: run.net_nodes,
                },
                path,
            })
        }
        ExtractMode::Closed => {
            extract_closed(region, member, xi, eta_gap, relax_threshold, params)
        }
        ExtractMode::General => {
            let y_hat = region.y_hat;
            let cut_radius = 6.0 * eps;
            let kept: Vec<Point2> = region
                .region_points
                .iter()
                .copied()
                .filter(|p| p.dist(y_hat) > cut_radius)
                .collect();
            if kept.is_empty() {
                return Err(Error::UnexpectedTopology(0));
            }
            // Friends-of-friends on grid-sampled points needs a linking
            // length of at least the grid diagonal; eta_gap alone is far
            // below the sampling resolution.
            let linking = eta_gap.max(1.5 * region.grid_step);
            let labels = fof_components(&kept, linking);
            let count = 1 + labels.iter().copied().max().unwrap_or(0) as usize;
            match count {
                1 => extract_closed(region, member, xi, eta_gap, relax_threshold, params),
                2 => extract_open_through_cut(
                    region, member, &kept, &labels, xi, eta_gap, relax_threshold, params,
                ),
                k => Err(Error::UnexpectedTopology(k)),
            }
        }
    }
}

fn join_through_cut(
    region: &EdtEstimate,
    member: &dyn Fn(Point2) -> bool,
    join_radius: f64,
    from: Point2,
    to: Point2,
    xi: f64,
    eta_gap: f64,
) -> Result<Vec<Point2>> {
    let y_hat = region.y_hat;
    // Region points eligible for the joining path: the cut plus the shell
    // band the endpoints live in.
    let pool_points: Vec<Point2> = region
        .region_points
        .iter()
        .copied()
        .filter(|p| p.dist(y_hat) <= join_radius)
        .collect();
    // Straight joining segment, when it stays inside the dilated cut area.
    let steps = (from.dist(to) / (xi / 2.0)).ceil().max(1.0) as usize;
    let cut_grid = PointGrid::new(pool_points.clone());
    let admissible = |z: Point2| {
        z.dist(y_hat) <= join_radius + eta_gap
            && (member(z) || cut_grid.nearest_dist(z).map_or(false, |d| d <= eta_gap))
    };
    let straight_ok = (1..steps).all(|k| admissible(from.lerp(to, k as f64 / steps as f64)));
    if straight_ok {
        return Ok(Vec::new());
    }
    // Otherwise path through the cut's own net.
    let mut pool = vec![from, to];
    pool.extend_from_slice(&pool_points);
    let graph = net_from_points(&pool, xi.min(from.dist(to) / 4.0).max(1e-9), 2.5 * xi)?;
    // `from` and `to` survive netting because they are first in the pool.
    let path = dijkstra_path(graph.adjacency(), 0, 1)?;
    Ok(path[1..path.len() - 1]
        .iter()
        .map(|&i| graph.nodes[i as usize])
        .collect())
}

fn extract_closed(
    region: &EdtEstimate,
    member: &dyn Fn(Point2) -> bool,
    xi: f64,
    eta_gap: f64,
    relax_threshold: f64,
    params: &ExtractParams,
) -> Result<ExtractedCurve> {
    let eps = region.epsilon;
    let y_hat = region.y_hat;
    let cut_radius = 6.0 * eps;
    let kept: Vec<Point2> = region
        .region_points
        .iter()
        .copied()
        .filter(|p| p.dist(y_hat) > cut_radius)
        .collect();
    if kept.len() < 2 {
        return Err(Error::UnexpectedTopology(0));
    }
    let shell_outer = cut_radius + region.grid_step + 2.5 * xi;
    let shell = |p: Point2| p.dist(y_hat) <= shell_outer;
    let run = open_run(&kept, xi, Some(&shell), Some(&shell), false)?;
    let path = Polyline::new(run.node_path, false)?;
    let (path, iters) = if params.relax {
        relax(&path, member, relax_threshold, 200)
    } else {
        (path, 0)
    };
    let (x0, x1) = (
        *path.vertices().first().expect("nonempty"),
        *path.vertices().last().expect("nonempty"),
    );
    let mut vertices = path.vertices().to_vec();
    vertices.extend(join_through_cut(region, member, shell_outer, x1, x0, xi, eta_gap)?);
    let closed = Polyline::new(vertices, true)?;
    let winding = params
        .hole_point
        .and_then(|h| winding_number(&closed, h).ok());
    Ok(ExtractedCurve {
        topology: Topology::Closed,
        endpoints: None,
        diagnostics: ExtractDiagnostics {
            path_length: closed.length(),
            winding,
            relax_iterations: iters,
            net_nodes: run.net_nodes,
        },
        path: closed,
    })
}

#[allow(clippy::too_many_arguments)]
fn extract_open_through_cut(
    region: &EdtEstimate,
    member: &dyn Fn(Point2) -> bool,
    kept: &[Point2],
    labels: &[u32],
    xi: f64,
    eta_gap: f64,
    relax_threshold: f64,
    params: &ExtractParams,
) -> Result<ExtractedCurve> {
    let y_hat = region.y_hat;
    let shell_outer = 6.0 * region.epsilon + region.grid_step + 2.5 * xi;
    let shell = |p: Point2| p.dist(y_hat) <= shell_outer;
    let mut runs = Vec::new();
    for comp in 0..2u32 {
        let points: Vec<Point2> = kept
            .iter()
            .zip(labels)
            .filter(|(_, &l)| l == comp)
            .map(|(p, _)| *p)
            .collect();
        // One endpoint pinned to the cut shell, the other free.
        let run = open_run(&points, xi, Some(&shell), None, false)?;
        runs.push(run);
    }
    // Orient both pieces so they meet at the shell: piece 0 ends at its
    // shell endpoint, piece 1 starts at its own.
    let (r0, r1) = (&runs[0], &runs[1]);
    let mut v0 = r0.node_path.clone();
    v0.reverse(); // path was shell -> free; we want free -> shell
    let shell0 = *v0.last().expect("nonempty");
    let shell1 = r1.node_path[0];
    let joint = join_through_cut(region, member, shell_outer, shell0, shell1, xi, eta_gap)?;
    let mut vertices = v0;
    vertices.extend(joint);
    vertices.extend(r1.node_path.iter().copied());
    let path = Polyline::new(vertices, false)?;
    let (path, iters) = if params.relax {
        relax(&path, member, relax_threshold, 200)
    } else {
        (path, 0)
    };
    let endpoints = (
        *path.vertices().first().expect("nonempty"),
        *path.vertices().last().expect("nonempty"),
    );
    Ok(ExtractedCurve {
        topology: Topology::Open,
        endpoints: Some(endpoints),
        diagnostics: ExtractDiagnostics {
            path_length: path.length(),
            winding: None,
            relax_iterations: iters,
            net_nodes: r0.net_nodes + r1.net_nodes,
        },
        path,
    })
}
