//! Delivery with any number of robots: snap everyone to a grid, solve the
//! resulting graph-delivery problem exactly, and map the relay back to the
//! plane. The grid detour costs at most a factor sqrt(2) plus the requested
//! additive slack.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::geometry::{distance, Frame, Point};
use crate::plan::{DeliveryPlan, EventKind, Instance, PlanEvent};

/// Hard cap on grid cells per side; past this the solver refuses and reports
/// the smallest workable slack.
const MAX_GRID_SIDE: i64 = 4000;

/// Axis-aligned leg lengths of the L-shaped path from `a` to `p`.
/// Their sum never exceeds sqrt(2) times the straight-line distance.
pub fn rectilinear_detour_bound(a: Point, p: Point) -> (f64, f64) {
    ((p.x - a.x).abs(), (p.y - a.y).abs())
}

#[derive(Debug, Clone)]
pub struct GridModel {
    /// Grid pitch; divides |SD| exactly.
    pub epsilon: f64,
    /// Side length of the enclosing square.
    pub delta: f64,
    /// World position of grid vertex (0, 0).
    pub origin: Point,
    pub cols: usize,
    pub rows: usize,
    pub source_vertex: usize,
    pub dest_vertex: usize,
    pub snapped_starts: Vec<usize>,
    /// Per-robot travel time to its snapped vertex, slowest speed scaled to 1.
    pub snap_wait: Vec<f64>,
    frame: Frame,
    corner: Point, // local coordinates of vertex (0, 0)
}

impl GridModel {
    pub fn vertex_count(&self) -> usize {
        self.cols * self.rows
    }

    fn vertex_local(&self, id: usize) -> Point {
        let (i, j) = (id % self.cols, id / self.cols);
        Point::new(self.corner.x + i as f64 * self.epsilon, self.corner.y + j as f64 * self.epsilon)
    }

    pub fn vertex_world(&self, id: usize) -> Point {
        self.frame.to_world(self.vertex_local(id))
    }

    /// Single global release time: everyone waits for the slowest snap.
    pub fn release_time(&self) -> f64 {
        self.snap_wait.iter().fold(0.0, |a, &b| a.max(b))
    }
}

/// Nearest lattice index to `x/eps`; ties go to the smaller index so snapped
/// vertices are lexicographically minimal in (x, y).
fn nearest_index(x: f64, eps: f64) -> i64 {
    let t = x / eps;
    let lo = t.floor();
    let frac = t - lo;
    if (frac - 0.5).abs() <= 1e-12 {
        lo as i64
    } else {
        t.round() as i64
    }
}

pub fn build_grid(instance: &Instance, eps_prime: f64) -> Result<GridModel> {
    instance.validate().map_err(Error::InvalidInstance)?;
    if !(eps_prime > 0.0) || !eps_prime.is_finite() {
        return Err(Error::InvalidInstance("eps_prime must be positive".into()));
    }
    if instance.source.approx_eq(instance.destination) {
        return Err(Error::DegenerateInstance);
    }
    let n = instance.robots.len();
    let sd = distance(instance.source, instance.destination);
    let frame = Frame::from_segment(instance.source, instance.destination)?;

    let subdivisions = ((n as f64 * sd / eps_prime - 1e-9).ceil() as i64).max(1);
    let eps = sd / subdivisions as f64;

    let locals: Vec<Point> = instance.robots.iter().map(|r| frame.to_local(r.start)).collect();
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (0.0f64, sd, 0.0f64, 0.0f64);
    for p in &locals {
        xmin = xmin.min(p.x);
        xmax = xmax.max(p.x);
        ymin = ymin.min(p.y);
        ymax = ymax.max(p.y);
    }

    let side = (xmax - xmin).max(ymax - ymin);
    let i_min = (xmin / eps + 1e-9).floor() as i64;
    let i_max = (xmax / eps - 1e-9).ceil() as i64;
    let j_min = (ymin / eps + 1e-9).floor() as i64;
    let j_max = (ymax / eps - 1e-9).ceil() as i64;
    let n_side = (i_max - i_min).max(j_max - j_min);
    if n_side > MAX_GRID_SIDE {
        // smallest slack for which the side stays under the cap
        let m_max = ((MAX_GRID_SIDE - 2) as f64 * sd / side).floor();
        let min_eps_prime =
            if m_max >= 1.0 { n as f64 * sd / m_max } else { f64::INFINITY };
        return Err(Error::GridTooLarge { min_eps_prime });
    }
    let cols = (n_side + 1) as usize;

    let min_speed =
        instance.robots.iter().map(|r| r.speed).fold(f64::INFINITY, f64::min);
    let clamp = |k: i64| k.clamp(0, n_side) as usize;
    let id_of = |i: i64, j: i64| clamp(j - j_min) * cols + clamp(i - i_min);

    let corner = Point::new(i_min as f64 * eps, j_min as f64 * eps);
    let mut model = GridModel {
        epsilon: eps,
        delta: n_side as f64 * eps,
        origin: frame.to_world(corner),
        cols,
        rows: cols,
        source_vertex: id_of(0, 0),
        dest_vertex: id_of(subdivisions, 0),
        snapped_starts: Vec::with_capacity(n),
        snap_wait: Vec::with_capacity(n),
        frame,
        corner,
    };
    for (r, p) in instance.robots.iter().zip(&locals) {
        let id = id_of(nearest_index(p.x, eps), nearest_index(p.y, eps));
        model.snapped_starts.push(id);
        model.snap_wait.push(distance(r.start, model.vertex_world(id)) / (r.speed / min_speed));
    }
    Ok(model)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphAgent {
    pub vertex: usize,
    pub speed: f64,
    /// Time before which the agent may not move.
    pub release: f64,
}

#[derive(Debug, Clone)]
pub struct GraphDeliveryProblem {
    pub vertex_count: usize,
    /// Undirected positive-weight edges.
    pub edges: Vec<(usize, usize, f64)>,
    pub agents: Vec<GraphAgent>,
    pub source: usize,
    pub dest: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphLeg {
    pub agent: usize,
    pub pickup_vertex: usize,
    pub handover_vertex: usize,
    /// When the agent obtained the message.
    pub pickup_time: f64,
    /// When the agent reached the handover vertex (delivery time on the last leg).
    pub arrival_time: f64,
    /// Vertices traversed while carrying, pickup to handover inclusive.
    pub path: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphDeliverySolution {
    pub total_time: f64,
    pub legs: Vec<GraphLeg>,
}

const INF: f64 = f64::INFINITY;

struct QItem {
    time: f64,
    agent: usize,
    vertex: usize,
}

impl PartialEq for QItem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for QItem {}
impl PartialOrd for QItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for QItem {
    // reversed: BinaryHeap is a max-heap, we want the smallest
    // (time, agent, vertex) first for deterministic settling order
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.agent.cmp(&self.agent))
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

fn dijkstra(adj: &[Vec<(usize, f64)>], start: usize) -> (Vec<f64>, Vec<Option<usize>>) {
    let n = adj.len();
    let mut dist = vec![INF; n];
    let mut parent = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[start] = 0.0;
    heap.push(QItem { time: 0.0, agent: 0, vertex: start });
    while let Some(QItem { time, vertex, .. }) = heap.pop() {
        if done[vertex] {
            continue;
        }
        done[vertex] = true;
        for &(w, len) in &adj[vertex] {
            let cand = time + len;
            if cand < dist[w] {
                dist[w] = cand;
                parent[w] = Some(vertex);
                heap.push(QItem { time: cand, agent: 0, vertex: w });
            }
        }
    }
    (dist, parent)
}

fn shortest_path_to(parent: &[Option<usize>], start: usize, target: usize) -> Vec<usize> {
    let mut path = vec![target];
    let mut v = target;
    while v != start {
        v = parent[v].expect("target unreachable despite finite distance");
        path.push(v);
    }
    path.reverse();
    path
}

#[derive(Clone, Copy, Debug)]
enum Origin {
    Initial,
    Edge { from_vertex: usize },
    Pickup { from_agent: usize },
}

/// Minimal-time message delivery on a weighted graph where agents move with
/// individual speeds after their release times, may wait anywhere, and
/// exchange the message only when co-located at a vertex.
///
/// Deterministic: states settle in (time, agent, vertex) order regardless of
/// thread count (the implementation is single-threaded).
pub fn solve_graph_delivery(problem: &GraphDeliveryProblem) -> Result<GraphDeliverySolution> {
    let n = problem.vertex_count;
    let k = problem.agents.len();
    if problem.source >= n || problem.dest >= n {
        return Err(Error::InvalidInstance("source/dest vertex out of range".into()));
    }
    if problem.source == problem.dest {
        return Ok(GraphDeliverySolution { total_time: 0.0, legs: vec![] });
    }
    if k == 0 {
        return Err(Error::Unreachable);
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b, w) in &problem.edges {
        adj[a].push((b, w));
        adj[b].push((a, w));
    }

    // earliest unencumbered arrival of each agent at each vertex
    let per_agent: Vec<(Vec<f64>, Vec<Option<usize>>)> =
        problem.agents.iter().map(|a| dijkstra(&adj, a.vertex)).collect();
    let earliest =
        |i: usize, u: usize| problem.agents[i].release + per_agent[i].0[u] / problem.agents[i].speed;

    let mut time = vec![vec![INF; n]; k];
    let mut origin = vec![vec![Origin::Initial; n]; k];
    let mut settled = vec![vec![false; n]; k];
    let mut vertex_reached = vec![false; n];
    let mut heap = BinaryHeap::new();

    for i in 0..k {
        let t0 = earliest(i, problem.source);
        if t0.is_finite() {
            time[i][problem.source] = t0;
            heap.push(QItem { time: t0, agent: i, vertex: problem.source });
        }
    }

    let mut final_state = None;
    while let Some(QItem { time: t, agent, vertex }) = heap.pop() {
        if settled[agent][vertex] || t > time[agent][vertex] {
            continue;
        }
        settled[agent][vertex] = true;
        if vertex == problem.dest {
            final_state = Some((agent, vertex));
            break;
        }
        // the message is now available at this vertex from time t onward
        if !vertex_reached[vertex] {
            vertex_reached[vertex] = true;
            for j in 0..k {
                let cand = t.max(earliest(j, vertex));
                if cand.is_finite() && cand < time[j][vertex] {
                    time[j][vertex] = cand;
                    origin[j][vertex] = Origin::Pickup { from_agent: agent };
                    heap.push(QItem { time: cand, agent: j, vertex });
                }
            }
        }
        let speed = problem.agents[agent].speed;
        for &(w, len) in &adj[vertex] {
            let cand = t + len / speed;
            if cand < time[agent][w] {
                time[agent][w] = cand;
                origin[agent][w] = Origin::Edge { from_vertex: vertex };
                heap.push(QItem { time: cand, agent, vertex: w });
            }
        }
    }

    let Some((mut agent, mut vertex)) = final_state else {
        return Err(Error::Unreachable);
    };
    let total_time = time[agent][vertex];

    // walk parents from the destination back to the initial pickup
    let mut legs_rev: Vec<GraphLeg> = Vec::new();
    let mut path_rev = vec![vertex];
    loop {
        match origin[agent][vertex] {
            Origin::Edge { from_vertex } => {
                path_rev.push(from_vertex);
                vertex = from_vertex;
            }
            Origin::Pickup { from_agent } => {
                legs_rev.push(GraphLeg {
                    agent,
                    pickup_vertex: vertex,
                    handover_vertex: path_rev[0],
                    pickup_time: time[agent][vertex],
                    arrival_time: time[agent][path_rev[0]],
                    path: path_rev.iter().rev().copied().collect(),
                });
                agent = from_agent;
                path_rev = vec![vertex];
            }
            Origin::Initial => {
                legs_rev.push(GraphLeg {
                    agent,
                    pickup_vertex: vertex,
                    handover_vertex: path_rev[0],
                    pickup_time: time[agent][vertex],
                    arrival_time: time[agent][path_rev[0]],
                    path: path_rev.iter().rev().copied().collect(),
                });
                break;
            }
        }
    }
    legs_rev.reverse();
    Ok(GraphDeliverySolution { total_time, legs: legs_rev })
}

/// Grid-based delivery planner for any robot count. The returned plan's time
/// is at most sqrt(2) times the unrestricted optimum plus `eps_prime`.
pub fn solve_multi(instance: &Instance, eps_prime: f64) -> Result<DeliveryPlan> {
    let grid = build_grid(instance, eps_prime)?;
    let min_speed =
        instance.robots.iter().map(|r| r.speed).fold(f64::INFINITY, f64::min);
    let release = grid.release_time();

    let mut edges = Vec::new();
    for j in 0..grid.rows {
        for i in 0..grid.cols {
            let id = j * grid.cols + i;
            if i + 1 < grid.cols {
                edges.push((id, id + 1, grid.epsilon));
            }
            if j + 1 < grid.rows {
                edges.push((id, id + grid.cols, grid.epsilon));
            }
        }
    }
    let problem = GraphDeliveryProblem {
        vertex_count: grid.vertex_count(),
        edges,
        agents: instance
            .robots
            .iter()
            .zip(&grid.snapped_starts)
            .map(|(r, &v)| GraphAgent { vertex: v, speed: r.speed / min_speed, release })
            .collect(),
        source: grid.source_vertex,
        dest: grid.dest_vertex,
    };
    let solution = solve_graph_delivery(&problem)?;

    // Reassemble world-space trajectories. Times below are in normalized
    // units (slowest speed 1) and get rescaled at the very end.
    let adj_dist = |a: usize, b: usize| {
        let (ai, aj) = (a % grid.cols, a / grid.cols);
        let (bi, bj) = (b % grid.cols, b / grid.cols);
        (ai.abs_diff(bi) + aj.abs_diff(bj)) as f64 * grid.epsilon
    };

    let per_agent: Vec<(Vec<f64>, Vec<Option<usize>>)> = {
        let mut adj = vec![Vec::new(); problem.vertex_count];
        for &(a, b, w) in &problem.edges {
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        problem.agents.iter().map(|a| dijkstra(&adj, a.vertex)).collect()
    };

    let mut trajectories: Vec<Vec<(f64, Point)>> = instance
        .robots
        .iter()
        .enumerate()
        .map(|(i, r)| {
            vec![
                (0.0, r.start),
                (grid.snap_wait[i], grid.vertex_world(grid.snapped_starts[i])),
            ]
        })
        .collect();
    // (position vertex, free-from time) per robot, after snapping and release
    let mut cursor: Vec<(usize, f64)> =
        grid.snapped_starts.iter().map(|&v| (v, release)).collect();

    let mut events = Vec::new();
    for (li, leg) in solution.legs.iter().enumerate() {
        let robot = leg.agent;
        let speed = problem.agents[robot].speed;
        let (at, free_from) = cursor[robot];
        // approach: shortest path for the first involvement, L-path afterwards
        let approach = if at == problem.agents[robot].vertex && free_from == release {
            shortest_path_to(&per_agent[robot].1, at, leg.pickup_vertex)
        } else {
            let (ai, aj) = (at % grid.cols, at / grid.cols);
            let (bi, bj) = (leg.pickup_vertex % grid.cols, leg.pickup_vertex / grid.cols);
            let mut p = vec![at];
            let mut i = ai as i64;
            while i != bi as i64 {
                i += if bi as i64 > i { 1 } else { -1 };
                p.push(aj * grid.cols + i as usize);
            }
            let mut j = aj as i64;
            while j != bj as i64 {
                j += if bj as i64 > j { 1 } else { -1 };
                p.push(j as usize * grid.cols + bi);
            }
            p
        };
        let mut t = free_from;
        let tw = &mut trajectories[robot];
        for pair in approach.windows(2) {
            t += adj_dist(pair[0], pair[1]) / speed;
            tw.push((t, grid.vertex_world(pair[1])));
        }
        debug_assert!(
            t <= leg.pickup_time + 1e-9,
            "robot {robot} reaches pickup late: {t} > {}",
            leg.pickup_time
        );
        events.push(PlanEvent {
            kind: if li == 0 { EventKind::Pickup } else { EventKind::Handover },
            time: leg.pickup_time,
            location: grid.vertex_world(leg.pickup_vertex),
            from_robot: if li == 0 { None } else { Some(solution.legs[li - 1].agent) },
            to_robot: Some(robot),
        });
        // re-summing step times can land an fp hair past the solver's value;
        // keep the waypoint clock monotone
        let mut t = leg.pickup_time.max(t);
        tw.push((t, grid.vertex_world(leg.pickup_vertex)));
        for pair in leg.path.windows(2) {
            t += adj_dist(pair[0], pair[1]) / speed;
            tw.push((t, grid.vertex_world(pair[1])));
        }
        cursor[robot] = (leg.handover_vertex, t);
    }
    let last = solution.legs.last().expect("nonempty legs for distinct source/dest");
    events.push(PlanEvent {
        kind: EventKind::Deliver,
        time: last.arrival_time,
        location: grid.vertex_world(last.handover_vertex),
        from_robot: Some(last.agent),
        to_robot: None,
    });

    let scale = 1.0 / min_speed;
    for w in trajectories.iter_mut().flatten() {
        w.0 *= scale;
    }
    for ev in &mut events {
        ev.time *= scale;
    }
    Ok(DeliveryPlan { total_time: solution.total_time * scale, events, trajectories })
}
