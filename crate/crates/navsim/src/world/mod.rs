//! Deterministic 2.5D occupancy-grid world.
//!
//! Cells carry an obstacle height in meters (0 = free); the world also hosts
//! scripted humanoids that ping-pong along polyline paths. All operations are
//! value-semantic and safe to call from any thread.

mod geom;
mod map_io;
mod render;

pub use map_io::{load_map, save_map, world_from_str, world_to_string};
pub use render::{pixel_ray, raycast, RayHit};

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Forward translation per `Forward25` action, meters.
pub const FORWARD_STEP_M: f64 = 0.25;
/// Rotation per turn/look action: 15 degrees.
pub const TURN_STEP_RAD: f64 = PI / 12.0;
/// Obstacle height written as `#` in map files, meters.
pub const FULL_OBSTACLE_HEIGHT_M: f64 = 3.0;
/// Height quantum for digit cells in map files, meters.
pub const HEIGHT_UNIT_M: f64 = 0.3;

/// Normalize an angle to (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let mut r = a % (2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    } else if r <= -PI {
        r += 2.0 * PI;
    }
    r
}

/// Planar pose plus camera tilt; the agent's full kinematic state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub x: f64,
    pub y: f64,
    /// Heading, radians, normalized to (-pi, pi].
    pub yaw: f64,
    /// Camera tilt, radians; negative looks down. Clamped to [-pi/2, pi/2].
    pub pitch: f64,
    /// Camera mounting height above the floor, meters.
    pub camera_height: f64,
}

impl AgentState {
    pub const DEFAULT_CAMERA_HEIGHT: f64 = 1.2;

    pub fn new(x: f64, y: f64, yaw: f64) -> Self {
        AgentState {
            x,
            y,
            yaw: wrap_angle(yaw),
            pitch: 0.0,
            camera_height: Self::DEFAULT_CAMERA_HEIGHT,
        }
    }

    pub fn with_pitch(mut self, pitch: f64) -> Self {
        self.pitch = pitch.clamp(-FRAC_PI_2, FRAC_PI_2);
        self
    }

    pub fn pos(&self) -> [f64; 2] {
        [self.x, self.y]
    }
}

/// Pinhole camera intrinsics in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CameraIntrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub width: usize,
    pub height: usize,
}

impl CameraIntrinsics {
    /// Default desk-scale camera: 64x64, 90 degree horizontal FOV.
    pub fn default_64() -> Self {
        CameraIntrinsics {
            fx: 32.0,
            fy: 32.0,
            cx: 32.0,
            cy: 32.0,
            width: 64,
            height: 64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fx > 0.0 && self.fy > 0.0) {
            return Err(Error::BadIntrinsics(format!(
                "focal lengths must be positive (fx={}, fy={})",
                self.fx, self.fy
            )));
        }
        if self.width == 0 || self.height == 0 {
            return Err(Error::BadIntrinsics("zero image dimensions".into()));
        }
        if !(self.cx >= 0.0 && self.cx < self.width as f64)
            || !(self.cy >= 0.0 && self.cy < self.height as f64)
        {
            return Err(Error::BadIntrinsics(format!(
                "principal point ({}, {}) outside {}x{} image",
                self.cx, self.cy, self.width, self.height
            )));
        }
        Ok(())
    }

    /// Half horizontal field of view, radians.
    pub fn half_hfov(&self) -> f64 {
        (self.width as f64 / 2.0 / self.fx).atan()
    }
}

/// Rendered egocentric observation: depth + human mask.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    /// Euclidean range to the nearest hit per pixel, row-major; no hit = +inf.
    pub depth: Vec<f32>,
    /// True where the nearest hit along the pixel ray is a humanoid.
    pub human_mask: Vec<bool>,
    pub intrinsics: CameraIntrinsics,
    pub agent_state: AgentState,
    pub sim_time: f64,
}

impl Observation {
    pub fn depth_at(&self, u: usize, v: usize) -> f32 {
        self.depth[v * self.intrinsics.width + u]
    }

    pub fn mask_at(&self, u: usize, v: usize) -> bool {
        self.human_mask[v * self.intrinsics.width + u]
    }

    /// Fraction of pixels flagged as humanoid.
    pub fn human_mask_ratio(&self) -> f64 {
        if self.human_mask.is_empty() {
            return 0.0;
        }
        let hits = self.human_mask.iter().filter(|m| **m).count();
        hits as f64 / self.human_mask.len() as f64
    }
}

/// Discrete action set: stop, 25 cm forward, 15 degree turns and looks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiscreteAction {
    Stop,
    Forward25,
    TurnLeft15,
    TurnRight15,
    LookUp15,
    LookDown15,
}

impl DiscreteAction {
    /// Arrow-glyph wire form used in planner output text.
    pub fn glyph(&self) -> &'static str {
        match self {
            DiscreteAction::Stop => "STOP",
            DiscreteAction::Forward25 => "F25",
            DiscreteAction::TurnLeft15 => "\u{2190}",
            DiscreteAction::TurnRight15 => "\u{2192}",
            DiscreteAction::LookUp15 => "\u{2191}",
            DiscreteAction::LookDown15 => "\u{2193}",
        }
    }
}

/// Scripted dynamic agent: a vertical cylinder ping-ponging along a polyline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Humanoid {
    pub id: u32,
    pub radius: f64,
    pub height: f64,
    /// Polyline waypoints in meters; at least one point.
    pub path: Vec<[f64; 2]>,
    pub speed: f64,
    /// Arc position along the path, in [0, path length].
    pub phase: f64,
    /// True when currently walking from the path end back to the start.
    pub reversed: bool,
}

impl Humanoid {
    pub fn path_length(&self) -> f64 {
        self.path
            .windows(2)
            .map(|w| ((w[1][0] - w[0][0]).powi(2) + (w[1][1] - w[0][1]).powi(2)).sqrt())
            .sum()
    }

    /// Current position obtained by walking `phase` meters along the path.
    pub fn position(&self) -> [f64; 2] {
        let mut remaining = self.phase;
        for w in self.path.windows(2) {
            let seg = [w[1][0] - w[0][0], w[1][1] - w[0][1]];
            let len = (seg[0] * seg[0] + seg[1] * seg[1]).sqrt();
            if remaining <= len {
                if len < 1e-12 {
                    return w[0];
                }
                let s = remaining / len;
                return [w[0][0] + s * seg[0], w[0][1] + s * seg[1]];
            }
            remaining -= len;
        }
        *self.path.last().expect("path has at least one waypoint")
    }

    /// Position at an arbitrary arc phase (same ping-pong convention).
    pub fn position_at_phase(&self, phase: f64, reversed: bool) -> [f64; 2] {
        let mut h = self.clone();
        h.phase = phase;
        h.reversed = reversed;
        h.position()
    }

    /// Advance `dist` meters along the path, reflecting at both endpoints.
    pub fn advance(&mut self, dist: f64) {
        let len = self.path_length();
        if len < 1e-12 || dist <= 0.0 {
            return;
        }
        let mut remaining = dist % (2.0 * len);
        loop {
            if !self.reversed {
                let room = len - self.phase;
                if remaining <= room {
                    self.phase += remaining;
                    return;
                }
                remaining -= room;
                self.phase = len;
                self.reversed = true;
            } else {
                let room = self.phase;
                if remaining <= room {
                    self.phase -= remaining;
                    return;
                }
                remaining -= room;
                self.phase = 0.0;
                self.reversed = false;
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) {
            return Err(Error::InvalidWorld(format!(
                "humanoid {} radius must be positive",
                self.id
            )));
        }
        if !(self.height > 0.0) {
            return Err(Error::InvalidWorld(format!(
                "humanoid {} height must be positive",
                self.id
            )));
        }
        if self.speed < 0.0 {
            return Err(Error::InvalidWorld(format!(
                "humanoid {} speed must be non-negative",
                self.id
            )));
        }
        if self.path.is_empty() {
            return Err(Error::InvalidWorld(format!(
                "humanoid {} path must have at least one waypoint",
                self.id
            )));
        }
        Ok(())
    }
}

/// Result of an agent-vs-world overlap query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CollisionReport {
    pub static_hit: bool,
    pub human_hit: bool,
}

/// 2.5D occupancy grid with per-cell obstacle heights and dynamic humanoids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupancyWorld {
    resolution: f64,
    width: usize,
    height: usize,
    /// Row-major obstacle heights, meters; 0 = free.
    cells: Vec<f64>,
    pub humanoids: Vec<Humanoid>,
    /// Bumped on every mutation; used as a planner memoization key.
    version: u64,
}

impl OccupancyWorld {
    pub fn new(width: usize, height: usize, resolution: f64) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidWorld("empty grid".into()));
        }
        if !(resolution > 0.0) {
            return Err(Error::InvalidWorld(format!(
                "resolution must be positive, got {resolution}"
            )));
        }
        Ok(OccupancyWorld {
            resolution,
            width,
            height,
            cells: vec![0.0; width * height],
            humanoids: Vec::new(),
            version: 0,
        })
    }

    pub fn from_parts(
        width: usize,
        height: usize,
        resolution: f64,
        cells: Vec<f64>,
        humanoids: Vec<Humanoid>,
    ) -> Result<Self> {
        let mut w = Self::new(width, height, resolution)?;
        if cells.len() != width * height {
            return Err(Error::InvalidWorld(format!(
                "cell count {} does not match {}x{}",
                cells.len(),
                width,
                height
            )));
        }
        if cells.iter().any(|h| *h < 0.0 || !h.is_finite()) {
            return Err(Error::InvalidWorld("obstacle heights must be finite and >= 0".into()));
        }
        w.cells = cells;
        for h in &humanoids {
            h.validate()?;
            let p = h.position();
            if !w.contains_point(p[0], p[1]) {
                return Err(Error::InvalidWorld(format!(
                    "humanoid {} spawns outside bounds at ({:.2}, {:.2})",
                    h.id, p[0], p[1]
                )));
            }
            if w.height_at_point(p[0], p[1]) > 0.0 {
                return Err(Error::InvalidWorld(format!(
                    "humanoid {} spawns on an obstacle cell",
                    h.id
                )));
            }
        }
        w.humanoids = humanoids;
        Ok(w)
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    /// Grid dimensions in cells, (width, height).
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// World extent in meters, (x, y).
    pub fn size_m(&self) -> (f64, f64) {
        (
            self.width as f64 * self.resolution,
            self.height as f64 * self.resolution,
        )
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn contains_point(&self, x: f64, y: f64) -> bool {
        let (w, h) = self.size_m();
        x >= 0.0 && y >= 0.0 && x < w && y < h
    }

    /// Cell (col, row) containing a point, if inside bounds.
    pub fn cell_of(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        if !self.contains_point(x, y) {
            return None;
        }
        let cx = (x / self.resolution) as usize;
        let cy = (y / self.resolution) as usize;
        Some((cx.min(self.width - 1), cy.min(self.height - 1)))
    }

    /// Center of a cell in meters.
    pub fn cell_center(&self, cx: usize, cy: usize) -> [f64; 2] {
        [
            (cx as f64 + 0.5) * self.resolution,
            (cy as f64 + 0.5) * self.resolution,
        ]
    }

    /// Obstacle height at a cell, meters; 0 = free. Out-of-range indices panic.
    pub fn cell_height(&self, cx: usize, cy: usize) -> f64 {
        self.cells[cy * self.width + cx]
    }

    pub fn is_free_cell(&self, cx: usize, cy: usize) -> bool {
        self.cell_height(cx, cy) == 0.0
    }

    fn height_at_point(&self, x: f64, y: f64) -> f64 {
        match self.cell_of(x, y) {
            Some((cx, cy)) => self.cell_height(cx, cy),
            None => 0.0,
        }
    }

    pub fn set_cell_height(&mut self, cx: usize, cy: usize, height_m: f64) {
        assert!(height_m >= 0.0, "obstacle height must be >= 0");
        self.cells[cy * self.width + cx] = height_m;
        self.version += 1;
    }

    /// Fill a rectangular block of cells (inclusive bounds) with one height.
    pub fn fill_block(&mut self, x0: usize, y0: usize, x1: usize, y1: usize, height_m: f64) {
        for cy in y0..=y1.min(self.height - 1) {
            for cx in x0..=x1.min(self.width - 1) {
                self.cells[cy * self.width + cx] = height_m;
            }
        }
        self.version += 1;
    }

    /// Replace the humanoid set (used when instantiating an episode).
    pub fn set_humanoids(&mut self, humanoids: Vec<Humanoid>) {
        self.humanoids = humanoids;
        self.version += 1;
    }

    /// Advance all humanoids by `dt` seconds, in place.
    pub fn advance_humanoids(&mut self, dt: f64) {
        for h in &mut self.humanoids {
            let d = h.speed * dt;
            h.advance(d);
        }
        self.version += 1;
    }

    /// Pure variant: a copy of the world with humanoids advanced by `dt`.
    pub fn step_humanoids(&self, dt: f64) -> OccupancyWorld {
        let mut w = self.clone();
        w.advance_humanoids(dt);
        w
    }

    /// Apply one discrete action. Forward motion is swept against obstacles
    /// and bounds and truncated at the contact point; turns and looks are
    /// exact 15 degree steps with yaw normalization and pitch clamping.
    pub fn step_agent(
        &self,
        state: AgentState,
        action: DiscreteAction,
        agent_radius: f64,
    ) -> AgentState {
        let mut s = state;
        match action {
            DiscreteAction::Stop => {}
            DiscreteAction::TurnLeft15 => s.yaw = wrap_angle(s.yaw + TURN_STEP_RAD),
            DiscreteAction::TurnRight15 => s.yaw = wrap_angle(s.yaw - TURN_STEP_RAD),
            DiscreteAction::LookUp15 => {
                s.pitch = (s.pitch + TURN_STEP_RAD).clamp(-FRAC_PI_2, FRAC_PI_2)
            }
            DiscreteAction::LookDown15 => {
                s.pitch = (s.pitch - TURN_STEP_RAD).clamp(-FRAC_PI_2, FRAC_PI_2)
            }
            DiscreteAction::Forward25 => {
                let dir = [s.yaw.cos(), s.yaw.sin()];
                let allowed = self.sweep_disc([s.x, s.y], dir, FORWARD_STEP_M, agent_radius);
                s.x += allowed * dir[0];
                s.y += allowed * dir[1];
            }
        }
        s
    }

    /// Farthest distance (<= `max_dist`) a disc of `radius` can travel from
    /// `from` along unit `dir` before contacting an obstacle cell or the
    /// world boundary.
    pub fn sweep_disc(&self, from: [f64; 2], dir: [f64; 2], max_dist: f64, radius: f64) -> f64 {
        let (wm, hm) = self.size_m();
        let mut allowed = max_dist;

        // World boundary: keep the disc center in [radius, extent - radius].
        let axes = [
            (from[0], dir[0], radius, wm - radius),
            (from[1], dir[1], radius, hm - radius),
        ];
        for (p, d, lo, hi) in axes {
            if d > 1e-12 {
                allowed = allowed.min(((hi - p) / d).max(0.0));
            } else if d < -1e-12 {
                allowed = allowed.min(((p - lo) / -d).max(0.0));
            }
        }

        // Obstacle cells inside the swept bounding box.
        let to = [from[0] + dir[0] * max_dist, from[1] + dir[1] * max_dist];
        let pad = radius + self.resolution;
        let min_x = (from[0].min(to[0]) - pad).max(0.0);
        let min_y = (from[1].min(to[1]) - pad).max(0.0);
        let max_x = (from[0].max(to[0]) + pad).min(wm - 1e-9);
        let max_y = (from[1].max(to[1]) + pad).min(hm - 1e-9);
        if min_x > max_x || min_y > max_y {
            return allowed.clamp(0.0, max_dist);
        }
        let c0 = (min_x / self.resolution) as usize;
        let r0 = (min_y / self.resolution) as usize;
        let c1 = ((max_x / self.resolution) as usize).min(self.width - 1);
        let r1 = ((max_y / self.resolution) as usize).min(self.height - 1);
        for cy in r0..=r1 {
            for cx in c0..=c1 {
                if self.cell_height(cx, cy) <= 0.0 {
                    continue;
                }
                let rect = self.cell_rect(cx, cy);
                if let Some(s) = geom::swept_disc_hit(from, dir, rect, radius) {
                    if s < allowed {
                        allowed = s;
                    }
                }
            }
        }
        allowed.clamp(0.0, max_dist)
    }

    fn cell_rect(&self, cx: usize, cy: usize) -> [f64; 4] {
        [
            cx as f64 * self.resolution,
            cy as f64 * self.resolution,
            (cx + 1) as f64 * self.resolution,
            (cy + 1) as f64 * self.resolution,
        ]
    }

    /// Disc-vs-world overlap: static obstacles (strict interior overlap) and
    /// humanoids (strict center-distance test).
    pub fn check_collision(&self, x: f64, y: f64, agent_radius: f64) -> CollisionReport {
        let mut report = CollisionReport::default();

        let pad = agent_radius + self.resolution;
        let (wm, hm) = self.size_m();
        let min_x = (x - pad).max(0.0);
        let min_y = (y - pad).max(0.0);
        let max_x = (x + pad).min(wm - 1e-9);
        let max_y = (y + pad).min(hm - 1e-9);
        if min_x <= max_x && min_y <= max_y {
            let c0 = (min_x / self.resolution) as usize;
            let r0 = (min_y / self.resolution) as usize;
            let c1 = ((max_x / self.resolution) as usize).min(self.width - 1);
            let r1 = ((max_y / self.resolution) as usize).min(self.height - 1);
            'outer: for cy in r0..=r1 {
                for cx in c0..=c1 {
                    if self.cell_height(cx, cy) > 0.0 {
                        let d = geom::dist_point_rect([x, y], self.cell_rect(cx, cy));
                        if d < agent_radius {
                            report.static_hit = true;
                            break 'outer;
                        }
                    }
                }
            }
        }

        for h in &self.humanoids {
            let p = h.position();
            let d = ((x - p[0]).powi(2) + (y - p[1]).powi(2)).sqrt();
            if d < agent_radius + h.radius {
                report.human_hit = true;
                break;
            }
        }
        report
    }

    /// Render an egocentric depth + human-mask observation.
    pub fn render(
        &self,
        state: AgentState,
        intr: &CameraIntrinsics,
        sim_time: f64,
    ) -> Result<Observation> {
        render::render(self, state, intr, sim_time)
    }
}
