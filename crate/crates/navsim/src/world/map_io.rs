//! Plain-text map files.
//!
//! One char per cell: `.` free, `#` full-height obstacle (3.0 m), digits 1-9
//! an obstacle of digit x 0.3 m. A structured header carries the resolution
//! and humanoid records. Load and save round-trip bit-exactly for worlds
//! whose obstacle heights are representable in this alphabet.

use std::fs;
use std::path::Path;

use super::{Humanoid, OccupancyWorld, FULL_OBSTACLE_HEIGHT_M, HEIGHT_UNIT_M};
use crate::error::{Error, Result};

pub fn world_to_string(world: &OccupancyWorld) -> String {
    let (w, h) = world.dims();
    let mut out = String::new();
    out.push_str("NAVMAP 1\n");
    out.push_str(&format!("resolution {}\n", world.resolution()));
    out.push_str(&format!("cells {} {}\n", w, h));
    for hum in &world.humanoids {
        out.push_str(&format!(
            "humanoid {} {} {} {} {} {} {}",
            hum.id,
            hum.radius,
            hum.height,
            hum.speed,
            hum.phase,
            if hum.reversed { 1 } else { 0 },
            hum.path.len()
        ));
        for p in &hum.path {
            out.push_str(&format!(" {} {}", p[0], p[1]));
        }
        out.push('\n');
    }
    out.push_str("grid\n");
    for cy in 0..h {
        for cx in 0..w {
            out.push(height_to_char(world.cell_height(cx, cy)));
        }
        out.push('\n');
    }
    out
}

fn height_to_char(height: f64) -> char {
    if height <= 0.0 {
        return '.';
    }
    if (height - FULL_OBSTACLE_HEIGHT_M).abs() < 1e-9 {
        return '#';
    }
    let k = (height / HEIGHT_UNIT_M).round();
    if (1.0..=9.0).contains(&k) && (height - k * HEIGHT_UNIT_M).abs() < 1e-9 {
        char::from_digit(k as u32, 10).unwrap()
    } else {
        // Not representable in the map alphabet; quantize to full height.
        '#'
    }
}

pub fn world_from_str(text: &str) -> Result<OccupancyWorld> {
    let mut lines = text.lines();
    let magic = lines
        .next()
        .ok_or_else(|| Error::MapFormat("empty file".into()))?;
    if magic.trim() != "NAVMAP 1" {
        return Err(Error::MapFormat(format!("bad magic line: {magic:?}")));
    }

    let mut resolution: Option<f64> = None;
    let mut dims: Option<(usize, usize)> = None;
    let mut humanoids: Vec<Humanoid> = Vec::new();

    for line in lines.by_ref() {
        let line = line.trim_end();
        if line == "grid" {
            break;
        }
        let mut it = line.split_whitespace();
        match it.next() {
            Some("resolution") => {
                let v = it
                    .next()
                    .ok_or_else(|| Error::MapFormat("resolution missing value".into()))?;
                resolution = Some(parse_f64(v)?);
            }
            Some("cells") => {
                let w = parse_usize(it.next().ok_or_else(|| miss("cells width"))?)?;
                let h = parse_usize(it.next().ok_or_else(|| miss("cells height"))?)?;
                dims = Some((w, h));
            }
            Some("humanoid") => {
                let id = parse_usize(it.next().ok_or_else(|| miss("humanoid id"))?)? as u32;
                let radius = parse_f64(it.next().ok_or_else(|| miss("humanoid radius"))?)?;
                let height = parse_f64(it.next().ok_or_else(|| miss("humanoid height"))?)?;
                let speed = parse_f64(it.next().ok_or_else(|| miss("humanoid speed"))?)?;
                let phase = parse_f64(it.next().ok_or_else(|| miss("humanoid phase"))?)?;
                let reversed = it.next().ok_or_else(|| miss("humanoid reversed"))? == "1";
                let n = parse_usize(it.next().ok_or_else(|| miss("humanoid path len"))?)?;
                let mut path = Vec::with_capacity(n);
                for _ in 0..n {
                    let x = parse_f64(it.next().ok_or_else(|| miss("path x"))?)?;
                    let y = parse_f64(it.next().ok_or_else(|| miss("path y"))?)?;
                    path.push([x, y]);
                }
                humanoids.push(Humanoid {
                    id,
                    radius,
                    height,
                    path,
                    speed,
                    phase,
                    reversed,
                });
            }
            Some(other) => {
                return Err(Error::MapFormat(format!("unknown header key {other:?}")));
            }
            None => {}
        }
    }

    let (w, h) = dims.ok_or_else(|| Error::MapFormat("missing cells header".into()))?;
    let resolution = resolution.ok_or_else(|| Error::MapFormat("missing resolution".into()))?;

    let mut cells = Vec::with_capacity(w * h);
    for (row_idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        if row_idx >= h {
            return Err(Error::MapFormat("too many grid rows".into()));
        }
        if line.chars().count() != w {
            return Err(Error::MapFormat(format!(
                "grid row {} has {} cells, expected {}",
                row_idx,
                line.chars().count(),
                w
            )));
        }
        for ch in line.chars() {
            cells.push(match ch {
                '.' => 0.0,
                '#' => FULL_OBSTACLE_HEIGHT_M,
                d @ '1'..='9' => (d.to_digit(10).unwrap() as f64) * HEIGHT_UNIT_M,
                other => {
                    return Err(Error::MapFormat(format!("bad grid char {other:?}")));
                }
            });
        }
    }
    if cells.len() != w * h {
        return Err(Error::MapFormat(format!(
            "grid has {} cells, expected {}",
            cells.len(),
            w * h
        )));
    }
    OccupancyWorld::from_parts(w, h, resolution, cells, humanoids)
}

fn miss(what: &str) -> Error {
    Error::MapFormat(format!("missing field: {what}"))
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|e| Error::MapFormat(format!("bad float {s:?}: {e}")))
}

fn parse_usize(s: &str) -> Result<usize> {
    s.parse::<usize>()
        .map_err(|e| Error::MapFormat(format!("bad integer {s:?}: {e}")))
}

pub fn save_map(world: &OccupancyWorld, path: &Path) -> Result<()> {
    fs::write(path, world_to_string(world))?;
    Ok(())
}

pub fn load_map(path: &Path) -> Result<OccupancyWorld> {
    let text = fs::read_to_string(path)?;
    world_from_str(&text)
}
