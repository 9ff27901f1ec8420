use super::{FrequencySweep, SimError};

/// Default depth a local minimum must reach to count as a notch (dB).
pub const DEFAULT_DEPTH_THRESHOLD_DB: f64 = -15.0;

/// Level used for the fractional bandwidth (dB, absolute).
const FBW_LEVEL_DB: f64 = -10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NotchMetrics {
    /// Refined notch frequency (Hz).
    pub f_notch: f64,
    /// Lowest sampled `|S21|` at the notch (dB).
    pub null_depth: f64,
    /// 10 dB fractional bandwidth (%), `None` when a band edge is off-grid.
    pub fbw_10db: Option<f64>,
    /// `f_notch` over the −3 dB bandwidth, `None` when unresolved.
    pub q_factor: Option<f64>,
}

/// Vertex abscissa of the parabola through three points.
fn parabola_vertex(x: [f64; 3], y: [f64; 3]) -> Option<f64> {
    let (d1, d2) = (x[1] - x[0], x[2] - x[1]);
    let s1 = (y[1] - y[0]) / d1;
    let s2 = (y[2] - y[1]) / d2;
    let curvature = (s2 - s1) / (x[2] - x[0]);
    if !(curvature.is_finite() && curvature > 0.0) {
        return None;
    }
    // y' = s1 + curvature·(2x − x0 − x1) = 0
    let v = 0.5 * (x[0] + x[1] - s1 / curvature);
    (v.is_finite() && v >= x[0] && v <= x[2]).then_some(v)
}

fn is_local_min(db: &[f64], i: usize) -> bool {
    db[i] < db[i - 1] && db[i] <= db[i + 1]
}

/// Linear interpolation of the frequency where the trace crosses `level`
/// between samples `i` and `j`.
fn crossing(grid: &[f64], db: &[f64], i: usize, j: usize, level: f64) -> f64 {
    let t = (level - db[i]) / (db[j] - db[i]);
    grid[i] + t * (grid[j] - grid[i])
}

/// Walks from `start` in direction `dir` while the trace stays below
/// `level`, never past `limit`. Returns the interpolated crossing.
fn walk_to_level(
    grid: &[f64],
    db: &[f64],
    start: usize,
    dir: isize,
    level: f64,
    limit: usize,
) -> Option<f64> {
    let mut j = start;
    loop {
        if j == limit {
            return None;
        }
        let next = (j as isize + dir) as usize;
        if db[next] >= level {
            return Some(crossing(grid, db, j, next, level));
        }
        j = next;
    }
}

/// Index of the local maximum reached by climbing from `start`.
fn climb(db: &[f64], start: usize, dir: isize) -> usize {
    let last = db.len() - 1;
    let mut j = start;
    loop {
        if (dir < 0 && j == 0) || (dir > 0 && j == last) {
            return j;
        }
        let next = (j as isize + dir) as usize;
        if db[next] < db[j] {
            return j;
        }
        j = next;
    }
}

fn bandwidths_at(grid: &[f64], db: &[f64], idx: usize, f_notch: f64) -> (Option<f64>, Option<f64>) {
    let last = db.len() - 1;

    let fbw = if db[idx] < FBW_LEVEL_DB {
        let lo = walk_to_level(grid, db, idx, -1, FBW_LEVEL_DB, 0);
        let hi = walk_to_level(grid, db, idx, 1, FBW_LEVEL_DB, last);
        lo.zip(hi).map(|(lo, hi)| 100.0 * (hi - lo) / f_notch)
    } else {
        None
    };

    // −3 dB relative to the higher of the two adjacent passband maxima
    let left_peak = climb(db, idx, -1);
    let right_peak = climb(db, idx, 1);
    let reference = db[left_peak].max(db[right_peak]);
    let level = reference - 3.0;
    let q = if db[idx] < level {
        let lo = walk_to_level(grid, db, idx, -1, level, left_peak);
        let hi = walk_to_level(grid, db, idx, 1, level, right_peak);
        lo.zip(hi).and_then(|(lo, hi)| {
            let bw = hi - lo;
            (bw > 0.0).then(|| f_notch / bw)
        })
    } else {
        None
    };
    (fbw, q)
}

fn refine(grid: &[f64], db: &[f64], i: usize) -> f64 {
    parabola_vertex(
        [grid[i - 1], grid[i], grid[i + 1]],
        [db[i - 1], db[i], db[i + 1]],
    )
    .unwrap_or(grid[i])
}

/// Local minima of `|S21|` (dB) deeper than `depth_threshold_db`, in
/// frequency order, with parabolic refinement of the notch frequency.
pub fn find_notches(
    sweep: &FrequencySweep,
    depth_threshold_db: f64,
) -> Result<Vec<NotchMetrics>, SimError> {
    if depth_threshold_db.is_nan() || depth_threshold_db >= 0.0 {
        return Err(SimError::Threshold(depth_threshold_db));
    }
    sweep.validate()?;
    let db = sweep.s21_db();
    let grid = &sweep.grid;
    if db.len() < 3 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for i in 1..db.len() - 1 {
        if db[i] < depth_threshold_db && is_local_min(&db, i) {
            let f_notch = refine(grid, &db, i);
            let (fbw_10db, q_factor) = bandwidths_at(grid, &db, i, f_notch);
            out.push(NotchMetrics {
                f_notch,
                null_depth: db[i],
                fbw_10db,
                q_factor,
            });
        }
    }
    Ok(out)
}

/// 10 dB fractional bandwidth (%) and Q of the notch nearest `f_notch`.
pub fn notch_bandwidths(sweep: &FrequencySweep, f_notch: f64) -> Result<(f64, f64), SimError> {
    sweep.validate()?;
    let db = sweep.s21_db();
    let grid = &sweep.grid;
    if db.len() < 3 || f_notch < grid[0] || f_notch > grid[grid.len() - 1] {
        return Err(SimError::NoNotch(f_notch));
    }
    let near = grid
        .partition_point(|&f| f < f_notch)
        .clamp(1, grid.len() - 2);
    // slide downhill to the discrete minimum
    let mut i = near;
    while i > 1 && db[i - 1] < db[i] {
        i -= 1;
    }
    while i < db.len() - 2 && db[i + 1] < db[i] {
        i += 1;
    }
    if !is_local_min(&db, i) {
        return Err(SimError::NoNotch(f_notch));
    }
    let refined = refine(grid, &db, i);
    match bandwidths_at(grid, &db, i, refined) {
        (Some(fbw), Some(q)) => Ok((fbw, q)),
        (fbw_10db, q_factor) => Err(SimError::UnresolvedBand { fbw_10db, q_factor }),
    }
}

/// The two deepest notches, ordered by frequency.
pub fn dominant_pair(notches: &[NotchMetrics]) -> Option<(NotchMetrics, NotchMetrics)> {
    let mut sorted = notches.to_vec();
    sorted.sort_by(|a, b| a.null_depth.total_cmp(&b.null_depth));
    let (a, b) = (*sorted.first()?, *sorted.get(1)?);
    Some(if a.f_notch < b.f_notch {
        (a, b)
    } else {
        (b, a)
    })
}
