//! Small planar geometry helpers for sweeps and overlap tests.

/// Distance from a point to an axis-aligned rectangle [x0, y0, x1, y1].
pub fn dist_point_rect(p: [f64; 2], rect: [f64; 4]) -> f64 {
    let dx = (rect[0] - p[0]).max(0.0).max(p[0] - rect[2]);
    let dy = (rect[1] - p[1]).max(0.0).max(p[1] - rect[3]);
    (dx * dx + dy * dy).sqrt()
}

/// Closest point of a rectangle to `p`.
pub fn closest_point_rect(p: [f64; 2], rect: [f64; 4]) -> [f64; 2] {
    [p[0].clamp(rect[0], rect[2]), p[1].clamp(rect[1], rect[3])]
}

/// Smallest t >= 0 with |o + t d - c| = r, if any (d need not be unit length
/// but t is in units of |d|; callers pass unit d).
pub fn ray_circle(o: [f64; 2], d: [f64; 2], c: [f64; 2], r: f64) -> Option<f64> {
    let ox = o[0] - c[0];
    let oy = o[1] - c[1];
    let b = d[0] * ox + d[1] * oy;
    let cc = ox * ox + oy * oy - r * r;
    let disc = b * b - cc;
    if disc < 0.0 {
        return None;
    }
    let s = disc.sqrt();
    let t_lo = -b - s;
    let t_hi = -b + s;
    if t_hi < 0.0 {
        return None;
    }
    Some(t_lo.max(0.0))
}

/// Entry/exit parameters of a ray against an AABB, if it intersects.
fn ray_aabb(o: [f64; 2], d: [f64; 2], rect: [f64; 4]) -> Option<(f64, f64)> {
    let mut t_enter = f64::NEG_INFINITY;
    let mut t_exit = f64::INFINITY;
    for axis in 0..2 {
        let (lo, hi) = (rect[axis], rect[axis + 2]);
        if d[axis].abs() < 1e-15 {
            if o[axis] < lo || o[axis] > hi {
                return None;
            }
        } else {
            let mut t0 = (lo - o[axis]) / d[axis];
            let mut t1 = (hi - o[axis]) / d[axis];
            if t0 > t1 {
                std::mem::swap(&mut t0, &mut t1);
            }
            t_enter = t_enter.max(t0);
            t_exit = t_exit.min(t1);
        }
    }
    if t_enter > t_exit {
        None
    } else {
        Some((t_enter, t_exit))
    }
}

/// Sweep a disc of radius `r` from `o` along unit `d` against a rectangle.
/// Returns the travel distance at first contact (0 when already in contact
/// and not moving away), or None when the sweep never touches the rectangle.
pub fn swept_disc_hit(o: [f64; 2], d: [f64; 2], rect: [f64; 4], r: f64) -> Option<f64> {
    let d0 = dist_point_rect(o, rect);
    if d0 < r - 1e-12 {
        // Already overlapping; block unless escaping.
        let cp = closest_point_rect(o, rect);
        let out = [o[0] - cp[0], o[1] - cp[1]];
        let away = out[0] * d[0] + out[1] * d[1];
        if away > 1e-12 && d0 > 1e-12 {
            return None;
        }
        return Some(0.0);
    }

    let expanded = [rect[0] - r, rect[1] - r, rect[2] + r, rect[3] + r];
    let (t_enter, t_exit) = ray_aabb(o, d, expanded)?;
    if t_exit < 0.0 {
        return None;
    }
    let te = t_enter.max(0.0);
    let hit = [o[0] + te * d[0], o[1] + te * d[1]];
    let in_x = hit[0] >= rect[0] && hit[0] <= rect[2];
    let in_y = hit[1] >= rect[1] && hit[1] <= rect[3];
    if in_x || in_y {
        return Some(te);
    }
    // Entry lies in a corner region: contact happens on a corner arc, if at all.
    let corners = [
        [rect[0], rect[1]],
        [rect[2], rect[1]],
        [rect[0], rect[3]],
        [rect[2], rect[3]],
    ];
    corners
        .iter()
        .filter_map(|c| ray_circle(o, d, *c, r))
        .fold(None, |best: Option<f64>, t| match best {
            Some(b) if b <= t => Some(b),
            _ => Some(t),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_rect_distance() {
        let rect = [1.0, 1.0, 2.0, 2.0];
        assert_eq!(dist_point_rect([1.5, 1.5], rect), 0.0);
        assert!((dist_point_rect([0.0, 1.5], rect) - 1.0).abs() < 1e-12);
        let d = dist_point_rect([0.0, 0.0], rect);
        assert!((d - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn head_on_sweep_contacts_face_minus_radius() {
        let rect = [2.0, -0.5, 3.0, 0.5];
        let t = swept_disc_hit([0.0, 0.0], [1.0, 0.0], rect, 0.25).unwrap();
        assert!((t - 1.75).abs() < 1e-12);
    }

    #[test]
    fn parallel_sweep_misses_offset_rect() {
        let rect = [2.0, 1.0, 3.0, 2.0];
        assert_eq!(swept_disc_hit([0.0, 0.0], [1.0, 0.0], rect, 0.5), None);
    }

    #[test]
    fn corner_sweep_matches_fine_step_oracle() {
        // Diagonal approach toward a cell corner; compare against stepping.
        let rect = [1.0, 1.0, 1.1, 1.1];
        let dir = [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2];
        let r = 0.2;
        let origin = [0.3, 0.05];
        let analytic = swept_disc_hit(origin, dir, rect, r);
        // Fine-step oracle.
        let mut oracle = None;
        let step = 1e-5;
        let mut s = 0.0;
        while s < 3.0 {
            let p = [origin[0] + s * dir[0], origin[1] + s * dir[1]];
            if dist_point_rect(p, rect) < r {
                oracle = Some(s);
                break;
            }
            s += step;
        }
        match (analytic, oracle) {
            (Some(a), Some(o)) => assert!(
                (a - o).abs() < 1e-3,
                "analytic {a} vs oracle {o}"
            ),
            (a, o) => panic!("hit mismatch: analytic {a:?} oracle {o:?}"),
        }
    }

    #[test]
    fn overlap_blocks_unless_escaping() {
        let rect = [0.0, 0.0, 1.0, 1.0];
        // Touch-distance approach moving inward is blocked at 0.
        assert_eq!(swept_disc_hit([-0.1, 0.5], [1.0, 0.0], rect, 0.2), Some(0.0));
        // Moving directly away is free.
        assert_eq!(swept_disc_hit([-0.1, 0.5], [-1.0, 0.0], rect, 0.2), None);
    }
}
