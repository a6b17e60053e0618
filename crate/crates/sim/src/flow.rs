//! Event-driven billiard flow: piecewise-linear motion with specular
//! reflection on axis-parallel walls, lattice offset tracking, and
//! diffusion-rate estimation from log-log displacement growth.

use crate::geometry::RealTable;
use thiserror::Error;

/// Wall-snapping / corner tolerance relative to the unit cell.
pub const SNAP: f64 = 1e-9;
/// Minimum positive event time, to keep the wall just left from re-firing.
const T_MIN: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("trajectory hit an obstacle corner at t = {t}")]
    CornerHit {
        t: f64,
        /// samples recorded before the hit
        partial: Box<DiffusionEstimate>,
    },
    #[error("event budget of {0} exceeded")]
    EventBudgetExceeded(u64),
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("start point lies inside an obstacle")]
    StartInsideObstacle,
    #[error("schedule needs at least 12 points, got {0}")]
    ScheduleTooShort(usize),
}

/// Billiard state: position in the fundamental domain, how many domains the
/// trajectory has wrapped through, unit direction. The reflection parity
/// (eps_x, eps_y) is the pair of direction sign bits.
#[derive(Debug, Clone, Copy)]
pub struct TrajectoryState {
    pub pos: (f64, f64),
    pub offset: (i64, i64),
    pub dir: (f64, f64),
    pub time: f64,
    pub reflections: u64,
    pub events: u64,
}

impl TrajectoryState {
    pub fn new(pos: (f64, f64), dir: (f64, f64)) -> Result<TrajectoryState, SimError> {
        let norm = (dir.0 * dir.0 + dir.1 * dir.1).sqrt();
        if !(norm > 0.0) {
            return Err(SimError::ZeroDirection);
        }
        Ok(TrajectoryState {
            pos,
            offset: (0, 0),
            dir: (dir.0 / norm, dir.1 / norm),
            time: 0.0,
            reflections: 0,
            events: 0,
        })
    }

    /// Sign bits of the direction: flips exactly at wall contacts.
    pub fn reflection_parity(&self) -> (bool, bool) {
        (self.dir.0 < 0.0, self.dir.1 < 0.0)
    }

    /// Absolute plane position.
    pub fn absolute(&self, table: &RealTable) -> (f64, f64) {
        (
            self.offset.0 as f64 * table.l1 + self.pos.0,
            self.offset.1 as f64 * table.l2 + self.pos.1,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum EventKind {
    WrapXPlus,
    WrapXMinus,
    WrapYPlus,
    WrapYMinus,
    ReflectV { x: f64 },
    ReflectH { y: f64 },
    Corner,
}

#[derive(Debug, Clone, Copy)]
struct Event {
    dt: f64,
    kind: EventKind,
}

fn next_event(table: &RealTable, s: &TrajectoryState) -> Event {
    let (x, y) = s.pos;
    let (dx, dy) = s.dir;
    let mut wrap = Event {
        dt: f64::INFINITY,
        kind: EventKind::WrapXPlus,
    };
    if dx > 0.0 {
        wrap = Event {
            dt: (table.l1 - x) / dx,
            kind: EventKind::WrapXPlus,
        };
    } else if dx < 0.0 {
        wrap = Event {
            dt: -x / dx,
            kind: EventKind::WrapXMinus,
        };
    }
    if dy > 0.0 {
        let dt = (table.l2 - y) / dy;
        if dt < wrap.dt {
            wrap = Event {
                dt,
                kind: EventKind::WrapYPlus,
            };
        }
    } else if dy < 0.0 {
        let dt = -y / dy;
        if dt < wrap.dt {
            wrap = Event {
                dt,
                kind: EventKind::WrapYMinus,
            };
        }
    }
    // walls on the domain seam produce reflection candidates that tie the
    // wrap exactly; the reflection must win or the trajectory would tunnel
    let horizon = wrap.dt + T_MIN;
    let mut hit: Option<Event> = None;
    for ob in &table.obstacles {
        // slab rejection against the bounding box
        let (bx0, bx1, by0, by1) = ob.bbox;
        let (mut t0, mut t1) = (0.0f64, horizon);
        if dx != 0.0 {
            let (a, b) = ((bx0 - x) / dx, (bx1 - x) / dx);
            t0 = t0.max(a.min(b));
            t1 = t1.min(a.max(b));
        } else if x < bx0 || x > bx1 {
            continue;
        }
        if dy != 0.0 {
            let (a, b) = ((by0 - y) / dy, (by1 - y) / dy);
            t0 = t0.max(a.min(b));
            t1 = t1.min(a.max(b));
        } else if y < by0 || y > by1 {
            continue;
        }
        if t0 > t1 {
            continue;
        }
        if dx != 0.0 {
            for w in &ob.vwalls {
                let dt = (w.x - x) / dx;
                if dt <= T_MIN || dt > horizon || hit.is_some_and(|h| dt >= h.dt) {
                    continue;
                }
                let ya = y + dy * dt;
                if ya < w.y0 - SNAP || ya > w.y1 + SNAP {
                    continue;
                }
                let kind = if ya < w.y0 + SNAP || ya > w.y1 - SNAP {
                    EventKind::Corner
                } else {
                    EventKind::ReflectV { x: w.x }
                };
                hit = Some(Event { dt, kind });
            }
        }
        if dy != 0.0 {
            for w in &ob.hwalls {
                let dt = (w.y - y) / dy;
                if dt <= T_MIN || dt > horizon || hit.is_some_and(|h| dt >= h.dt) {
                    continue;
                }
                let xa = x + dx * dt;
                if xa < w.x0 - SNAP || xa > w.x1 + SNAP {
                    continue;
                }
                let kind = if xa < w.x0 + SNAP || xa > w.x1 - SNAP {
                    EventKind::Corner
                } else {
                    EventKind::ReflectH { y: w.y }
                };
                hit = Some(Event { dt, kind });
            }
        }
    }
    match hit {
        Some(h) => h,
        None => wrap,
    }
}

fn apply_event(table: &RealTable, s: &mut TrajectoryState, e: &Event) {
    let (dx, dy) = s.dir;
    s.pos.0 += dx * e.dt;
    s.pos.1 += dy * e.dt;
    s.time += e.dt;
    s.events += 1;
    match e.kind {
        EventKind::WrapXPlus => {
            s.pos.0 = 0.0;
            s.offset.0 += 1;
        }
        EventKind::WrapXMinus => {
            s.pos.0 = table.l1;
            s.offset.0 -= 1;
        }
        EventKind::WrapYPlus => {
            s.pos.1 = 0.0;
            s.offset.1 += 1;
        }
        EventKind::WrapYMinus => {
            s.pos.1 = table.l2;
            s.offset.1 -= 1;
        }
        EventKind::ReflectV { x } => {
            s.pos.0 = x;
            s.dir.0 = -s.dir.0;
            s.reflections += 1;
            renormalize(&mut s.dir);
        }
        EventKind::ReflectH { y } => {
            s.pos.1 = y;
            s.dir.1 = -s.dir.1;
            s.reflections += 1;
            renormalize(&mut s.dir);
        }
        EventKind::Corner => {}
    }
}

fn renormalize(dir: &mut (f64, f64)) {
    let norm = (dir.0 * dir.0 + dir.1 * dir.1).sqrt();
    dir.0 /= norm;
    dir.1 /= norm;
}

/// Advance the flow by duration t. Event-driven: no fixed time step.
pub fn advance(
    table: &RealTable,
    mut state: TrajectoryState,
    t: f64,
    max_events: u64,
) -> Result<TrajectoryState, SimError> {
    let t_end = state.time + t;
    if table.point_blocked(state.pos.0, state.pos.1) {
        return Err(SimError::StartInsideObstacle);
    }
    loop {
        let e = next_event(table, &state);
        if state.time + e.dt >= t_end {
            let dt = t_end - state.time;
            state.pos.0 += state.dir.0 * dt;
            state.pos.1 += state.dir.1 * dt;
            state.time = t_end;
            return Ok(state);
        }
        if e.kind == EventKind::Corner {
            let t = state.time + e.dt;
            return Err(SimError::CornerHit {
                t,
                partial: Box::new(DiffusionEstimate::empty()),
            });
        }
        apply_event(table, &mut state, &e);
        if state.events > max_events {
            return Err(SimError::EventBudgetExceeded(max_events));
        }
    }
}

/// Max-displacement series on a geometric time schedule with the fitted
/// log-log slope.
#[derive(Debug, Clone)]
pub struct DiffusionEstimate {
    pub times: Vec<f64>,
    pub max_disp: Vec<f64>,
    /// slope clamped into [0, 1]
    pub delta_hat: f64,
    /// unclamped least-squares slope
    pub raw_slope: f64,
    /// index range of the fit window
    pub window: (usize, usize),
    /// RMS residual of the fit
    pub residual: f64,
    pub events: u64,
    pub reflections: u64,
}

impl DiffusionEstimate {
    fn empty() -> DiffusionEstimate {
        DiffusionEstimate {
            times: vec![],
            max_disp: vec![],
            delta_hat: f64::NAN,
            raw_slope: f64::NAN,
            window: (0, 0),
            residual: f64::NAN,
            events: 0,
            reflections: 0,
        }
    }

    pub fn final_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    pub fn final_disp(&self) -> f64 {
        self.max_disp.last().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EstimateParams {
    pub t_max: f64,
    /// number of geometric sample times
    pub schedule_len: usize,
    /// sample-time span: first sample at t_max / span
    pub span: f64,
    /// fit over the last `fit_window` samples
    pub fit_window: usize,
    pub max_events: u64,
}

impl EstimateParams {
    pub fn new(t_max: f64) -> EstimateParams {
        EstimateParams {
            t_max,
            schedule_len: 48,
            span: 1e4,
            fit_window: 24,
            max_events: u64::MAX,
        }
    }
}

/// Geometric sample schedule from t_max/span to t_max.
pub fn geometric_schedule(params: &EstimateParams) -> Vec<f64> {
    let n = params.schedule_len;
    let ratio = params.span.powf(1.0 / (n as f64 - 1.0));
    (0..n)
        .map(|j| params.t_max / ratio.powi((n - 1 - j) as i32))
        .collect()
}

/// Record the maximal distance from the start at geometrically spaced times
/// and fit the diffusion exponent over the final window.
pub fn estimate_diffusion(
    table: &RealTable,
    start: (f64, f64),
    dir: (f64, f64),
    params: &EstimateParams,
) -> Result<DiffusionEstimate, SimError> {
    if params.schedule_len < 12 {
        return Err(SimError::ScheduleTooShort(params.schedule_len));
    }
    if table.point_blocked(start.0, start.1) {
        return Err(SimError::StartInsideObstacle);
    }
    let times = geometric_schedule(params);
    let mut state = TrajectoryState::new(start, dir)?;
    let origin = state.absolute(table);
    let mut max_disp_sq = 0.0f64;
    let mut recorded: Vec<f64> = Vec::with_capacity(times.len());
    let mut next_sample = 0usize;
    let disp_sq = |s: &TrajectoryState, dt: f64| -> f64 {
        let (ax, ay) = s.absolute(table);
        let px = ax + s.dir.0 * dt - origin.0;
        let py = ay + s.dir.1 * dt - origin.1;
        px * px + py * py
    };
    let corner = |state: &TrajectoryState,
                  t: f64,
                  times: &[f64],
                  recorded: Vec<f64>|
     -> SimError {
        let k = recorded.len();
        SimError::CornerHit {
            t,
            partial: Box::new(DiffusionEstimate {
                times: times[..k].to_vec(),
                max_disp: recorded,
                delta_hat: f64::NAN,
                raw_slope: f64::NAN,
                window: (0, 0),
                residual: f64::NAN,
                events: state.events,
                reflections: state.reflections,
            }),
        }
    };
    loop {
        let e = next_event(table, &state);
        let t_event = state.time + e.dt;
        while next_sample < times.len() && times[next_sample] <= t_event {
            let dt = times[next_sample] - state.time;
            max_disp_sq = max_disp_sq.max(disp_sq(&state, dt));
            recorded.push(max_disp_sq.sqrt());
            next_sample += 1;
        }
        if next_sample >= times.len() {
            break;
        }
        if e.kind == EventKind::Corner {
            return Err(corner(&state, t_event, &times, recorded));
        }
        apply_event(table, &mut state, &e);
        max_disp_sq = max_disp_sq.max(disp_sq(&state, 0.0));
        if state.events > params.max_events {
            return Err(SimError::EventBudgetExceeded(params.max_events));
        }
    }
    // least-squares slope of log displacement against log time
    let lo = times.len().saturating_sub(params.fit_window);
    let hi = times.len();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for j in lo..hi {
        if recorded[j] > 0.0 {
            xs.push(times[j].ln());
            ys.push(recorded[j].ln());
        }
    }
    let nf = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for k in 0..xs.len() {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    let raw_slope = sxy / sxx;
    let intercept = my - raw_slope * mx;
    let mut ss = 0.0;
    for k in 0..xs.len() {
        let r = ys[k] - (raw_slope * xs[k] + intercept);
        ss += r * r;
    }
    let residual = (ss / nf).sqrt();
    Ok(DiffusionEstimate {
        times,
        max_disp: recorded,
        delta_hat: raw_slope.clamp(0.0, 1.0),
        raw_slope,
        window: (lo, hi),
        residual,
        events: state.events,
        reflections: state.reflections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{cross_polygon, RealTable};

    #[test]
    fn free_flight_advances_offset() {
        let table = RealTable::empty(1.0, 1.0).unwrap();
        let s = TrajectoryState::new((0.25, 0.25), (1.0, 0.0)).unwrap();
        let s = advance(&table, s, 5.0, 1 << 20).unwrap();
        assert_eq!(s.offset, (5, 0));
        assert!((s.pos.0 - 0.25).abs() < 1e-12);
        assert_eq!(s.reflections, 0);
    }

    #[test]
    fn vertical_direction_in_corridor_never_reflects() {
        // obstacle occupies x in (0.3, 0.7); a vertical line at x = 0.1 is free
        let p = cross_polygon((0.5, 0.5), &[0.2], &[0.2]);
        let table = RealTable::from_polygons(1.0, 1.0, vec![p]).unwrap();
        let s = TrajectoryState::new((0.1, 0.5), (0.0, 1.0)).unwrap();
        let s = advance(&table, s, 100.0, 1 << 20).unwrap();
        assert_eq!(s.reflections, 0);
        assert_eq!(s.offset, (0, 100));
    }

    #[test]
    fn reflection_flips_direction_sign() {
        let p = cross_polygon((0.5, 0.5), &[0.2], &[0.2]);
        let table = RealTable::from_polygons(1.0, 1.0, vec![p]).unwrap();
        // aimed straight at the left wall of the obstacle
        let s = TrajectoryState::new((0.1, 0.5), (1.0, 0.0)).unwrap();
        let s = advance(&table, s, 0.5, 1 << 20).unwrap();
        assert_eq!(s.reflections, 1);
        assert!(s.dir.0 < 0.0);
        assert_eq!(s.reflection_parity(), (true, false));
    }

    #[test]
    fn empty_table_slope_is_one() {
        let table = RealTable::empty(1.0, 1.0).unwrap();
        let params = EstimateParams::new(1e6);
        let est = estimate_diffusion(
            &table,
            (0.3, 0.4),
            (0.6, 0.8),
            &params,
        )
        .unwrap();
        assert!(est.delta_hat >= 0.999, "slope {}", est.delta_hat);
        // displacement series nondecreasing
        for w in est.max_disp.windows(2) {
            assert!(w[1] >= w[0]);
        }
    }

    #[test]
    fn speed_preserved_over_many_reflections() {
        let p = cross_polygon((0.5, 0.5), &[0.35, 0.15], &[0.1, 0.3]);
        let table = RealTable::from_polygons(1.0, 1.0, vec![p]).unwrap();
        let s = TrajectoryState::new((0.05, 0.05), (0.6234898, 0.78183148)).unwrap();
        let s = advance(&table, s, 2e4, 1 << 26).unwrap();
        let norm = (s.dir.0 * s.dir.0 + s.dir.1 * s.dir.1).sqrt();
        assert!((norm - 1.0).abs() <= 1e-12);
        assert!(s.reflections > 1000);
    }

    #[test]
    fn corner_hit_detected() {
        let p = cross_polygon((0.5, 0.5), &[0.25], &[0.25]);
        let table = RealTable::from_polygons(1.0, 1.0, vec![p]).unwrap();
        // aim exactly at the obstacle corner (0.25, 0.25)
        let s = TrajectoryState::new((0.05, 0.05), (1.0, 1.0)).unwrap();
        match advance(&table, s, 10.0, 1 << 20) {
            Err(SimError::CornerHit { .. }) => {}
            other => panic!("expected corner hit, got {other:?}"),
        }
    }

    #[test]
    fn schedule_too_short_rejected() {
        let table = RealTable::empty(1.0, 1.0).unwrap();
        let mut params = EstimateParams::new(1e4);
        params.schedule_len = 8;
        assert!(matches!(
            estimate_diffusion(&table, (0.2, 0.2), (1.0, 0.5), &params),
            Err(SimError::ScheduleTooShort(8))
        ));
    }
}
