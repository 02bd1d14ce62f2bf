//! Pinhole depth + human-mask rendering over the 2.5D grid.
//!
//! Rays are cast through integer pixel coordinates with an Amanatides-Woo
//! grid walk. A ray hits an obstacle cell only while its height at that range
//! is below the cell's obstacle top; free cells contribute a ground-plane hit
//! for descending rays. Humanoids are tested as vertical cylinders. Depth is
//! the Euclidean range to the nearest hit (+inf when nothing is hit before
//! the ray leaves the grid).

use super::{AgentState, CameraIntrinsics, Humanoid, Observation, OccupancyWorld};
use crate::error::{Error, Result};
use crate::parallel::par_map_range;

/// Nearest intersection along a ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayHit {
    /// Euclidean range to the hit, meters; +inf when nothing was hit.
    pub range: f64,
    /// True when the nearest hit is a humanoid (strictly nearer than statics).
    pub humanoid: bool,
}

impl RayHit {
    pub const MISS: RayHit = RayHit {
        range: f64::INFINITY,
        humanoid: false,
    };
}

/// World-frame origin and unit direction of the ray through pixel (u, v).
///
/// Continuous coordinates are accepted; integer values address pixel rays
/// exactly, making this the inverse of `projection::project_point`.
pub fn pixel_ray(
    state: &AgentState,
    intr: &CameraIntrinsics,
    u: f64,
    v: f64,
) -> ([f64; 3], [f64; 3]) {
    let xc = (u - intr.cx) / intr.fx;
    let yc = (v - intr.cy) / intr.fy;
    let zc = 1.0;

    let (sp, cp) = state.pitch.sin_cos();
    // Agent frame: x forward, y left, z up.
    let ax = sp * yc + cp * zc;
    let ay = -xc;
    let az = -cp * yc + sp * zc;

    let (sy, cy_) = state.yaw.sin_cos();
    let wx = cy_ * ax - sy * ay;
    let wy = sy * ax + cy_ * ay;
    let wz = az;

    let n = (wx * wx + wy * wy + wz * wz).sqrt();
    (
        [state.x, state.y, state.camera_height],
        [wx / n, wy / n, wz / n],
    )
}

/// Nearest hit along a world-frame ray (origin must lie inside the grid).
pub fn raycast(world: &OccupancyWorld, origin: [f64; 3], dir: [f64; 3]) -> RayHit {
    let mut best = raycast_static(world, origin, dir);
    for h in &world.humanoids {
        if let Some(t) = ray_cylinder(origin, dir, h) {
            if t < best.range {
                best = RayHit {
                    range: t,
                    humanoid: true,
                };
            }
        }
    }
    best
}

fn raycast_static(world: &OccupancyWorld, o: [f64; 3], d: [f64; 3]) -> RayHit {
    let res = world.resolution();
    let (w, h) = world.dims();
    let (dx, dy, dz) = (d[0], d[1], d[2]);

    let mut cx = (o[0] / res).floor() as isize;
    let mut cy = (o[1] / res).floor() as isize;

    let hit = |range: f64| RayHit {
        range,
        humanoid: false,
    };

    if dx.abs() < 1e-15 && dy.abs() < 1e-15 {
        // Vertical ray: only the current cell column matters.
        if cx < 0 || cy < 0 || cx >= w as isize || cy >= h as isize {
            return RayHit::MISS;
        }
        let hgt = world.cell_height(cx as usize, cy as usize);
        if hgt > 0.0 {
            if o[2] <= hgt {
                return hit(0.0);
            }
            if dz < 0.0 {
                return hit((hgt - o[2]) / dz);
            }
        } else if dz < 0.0 {
            return hit(-o[2] / dz);
        }
        return RayHit::MISS;
    }

    let step_x: isize = if dx > 0.0 { 1 } else { -1 };
    let step_y: isize = if dy > 0.0 { 1 } else { -1 };
    let mut t_max_x = if dx > 1e-15 {
        ((cx + 1) as f64 * res - o[0]) / dx
    } else if dx < -1e-15 {
        (cx as f64 * res - o[0]) / dx
    } else {
        f64::INFINITY
    };
    let mut t_max_y = if dy > 1e-15 {
        ((cy + 1) as f64 * res - o[1]) / dy
    } else if dy < -1e-15 {
        (cy as f64 * res - o[1]) / dy
    } else {
        f64::INFINITY
    };
    let t_delta_x = if dx.abs() > 1e-15 {
        res / dx.abs()
    } else {
        f64::INFINITY
    };
    let t_delta_y = if dy.abs() > 1e-15 {
        res / dy.abs()
    } else {
        f64::INFINITY
    };

    let mut t_enter = 0.0f64;
    loop {
        if cx < 0 || cy < 0 || cx >= w as isize || cy >= h as isize {
            return RayHit::MISS;
        }
        let t_exit = t_max_x.min(t_max_y);
        let hgt = world.cell_height(cx as usize, cy as usize);
        if hgt > 0.0 {
            let z_enter = o[2] + dz * t_enter;
            if z_enter <= hgt {
                return hit(t_enter);
            }
            if dz < 0.0 {
                let t_top = (hgt - o[2]) / dz;
                if t_top <= t_exit {
                    return hit(t_top);
                }
            }
        } else if dz < 0.0 {
            let t_floor = -o[2] / dz;
            if t_floor >= t_enter - 1e-12 && t_floor <= t_exit {
                return hit(t_floor);
            }
        }
        if t_max_x < t_max_y {
            t_enter = t_max_x;
            t_max_x += t_delta_x;
            cx += step_x;
        } else {
            t_enter = t_max_y;
            t_max_y += t_delta_y;
            cy += step_y;
        }
    }
}

/// Smallest t > 0 where the ray enters the humanoid's cylinder volume.
fn ray_cylinder(o: [f64; 3], d: [f64; 3], hum: &Humanoid) -> Option<f64> {
    let p = hum.position();
    let ox = o[0] - p[0];
    let oy = o[1] - p[1];
    let dz = d[2];

    // Parameter interval with z inside [0, height].
    let (tz_lo, tz_hi) = if dz.abs() < 1e-15 {
        if o[2] < 0.0 || o[2] > hum.height {
            return None;
        }
        (0.0, f64::INFINITY)
    } else {
        let t0 = (0.0 - o[2]) / dz;
        let t1 = (hum.height - o[2]) / dz;
        (t0.min(t1), t0.max(t1))
    };

    // Parameter interval inside the circle footprint.
    let a = d[0] * d[0] + d[1] * d[1];
    let (tr_lo, tr_hi) = if a < 1e-15 {
        if ox * ox + oy * oy > hum.radius * hum.radius {
            return None;
        }
        (0.0, f64::INFINITY)
    } else {
        let b = d[0] * ox + d[1] * oy;
        let c = ox * ox + oy * oy - hum.radius * hum.radius;
        let disc = b * b - a * c;
        if disc < 0.0 {
            return None;
        }
        let s = disc.sqrt();
        (((-b) - s) / a, ((-b) + s) / a)
    };

    let t_en = tr_lo.max(tz_lo).max(1e-9);
    let t_ex = tr_hi.min(tz_hi);
    if t_en <= t_ex {
        Some(t_en)
    } else {
        None
    }
}

pub(super) fn render(
    world: &OccupancyWorld,
    state: AgentState,
    intr: &CameraIntrinsics,
    sim_time: f64,
) -> Result<Observation> {
    intr.validate()?;
    if !world.contains_point(state.x, state.y) {
        return Err(Error::OutOfBounds {
            x: state.x,
            y: state.y,
        });
    }

    let w = intr.width;
    let rows: Vec<Vec<(f32, bool)>> = par_map_range(intr.height, |v| {
        (0..w)
            .map(|u| {
                let (origin, dir) = pixel_ray(&state, intr, u as f64, v as f64);
                let hit = raycast(world, origin, dir);
                (hit.range as f32, hit.humanoid)
            })
            .collect()
    });

    let mut depth = Vec::with_capacity(w * intr.height);
    let mut mask = Vec::with_capacity(w * intr.height);
    for row in rows {
        for (d, m) in row {
            depth.push(d);
            mask.push(m);
        }
    }
    Ok(Observation {
        depth,
        human_mask: mask,
        intrinsics: *intr,
        agent_state: state,
        sim_time,
    })
}
