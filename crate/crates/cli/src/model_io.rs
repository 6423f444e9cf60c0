//! Model readers: profile text, STL, OBJ, and built-in fixtures.
//!
//! Profile text lists polygons in the XZ plane, one `x z` pair per line:
//!
//! ```text
//! # comment
//! polygon
//! 0 0
//! 60 0
//! 60 20
//! hole
//! 10 5
//! ...
//! ```

use std::fmt::Write;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use onepath_core::fixtures;
use onepath_core::geometry::{ModelMode, ProfilePolygon};
use onepath_core::{Point, Profile, SurfaceModel, TriMesh};

use crate::error::{io_err, CliError, Result};

pub fn parse_profile(text: &str, path: &Path) -> Result<Profile> {
    let err =
        |line: usize, message: &str| CliError::Parse { path: path.to_path_buf(), line, message: message.to_string() };
    let mut polygons: Vec<ProfilePolygon<f64>> = Vec::new();
    let mut in_hole = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        match line {
            "" => continue,
            "polygon" => {
                polygons.push(ProfilePolygon::new(Vec::new(), Vec::new()));
                in_hole = false;
            }
            "hole" => {
                let poly = polygons.last_mut().ok_or_else(|| err(i + 1, "`hole` before `polygon`"))?;
                poly.holes.push(Vec::new());
                in_hole = true;
            }
            _ => {
                let nums: Vec<f64> = line
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| err(i + 1, "expected `x z`"))?;
                if nums.len() != 2 {
                    return Err(err(i + 1, "expected `x z`"));
                }
                let poly = polygons.last_mut().ok_or_else(|| err(i + 1, "point before `polygon`"))?;
                let p = Point::xz(nums[0], nums[1]);
                match (in_hole, poly.holes.last_mut()) {
                    (true, Some(h)) => h.push(p),
                    _ => poly.outer.push(p),
                }
            }
        }
    }
    Ok(Profile::new(polygons)?)
}

pub fn profile_to_text(profile: &Profile) -> String {
    let mut out = String::new();
    for poly in profile.polygons() {
        out.push_str("polygon\n");
        for p in &poly.outer {
            let _ = writeln!(out, "{} {}", p.x, p.z);
        }
        for h in &poly.holes {
            out.push_str("hole\n");
            for p in h {
                let _ = writeln!(out, "{} {}", p.x, p.z);
            }
        }
    }
    out
}

pub fn read_stl(path: &Path) -> Result<TriMesh> {
    let file = File::open(path).map_err(io_err(path))?;
    let mesh = stl_io::read_stl(&mut BufReader::new(file)).map_err(io_err(path))?;
    let vertices =
        mesh.vertices.iter().map(|v| Point::new(f64::from(v[0]), f64::from(v[1]), f64::from(v[2]))).collect();
    let triangles = mesh.faces.iter().map(|f| f.vertices).collect();
    Ok(TriMesh::new(vertices, triangles)?)
}

pub fn read_obj(path: &Path) -> Result<TriMesh> {
    let opts = tobj::LoadOptions { triangulate: true, single_index: true, ..Default::default() };
    let (models, _) = tobj::load_obj(path, &opts).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: 0,
        message: e.to_string(),
    })?;
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for m in models {
        let base = vertices.len();
        vertices.extend(
            m.mesh.positions.chunks_exact(3).map(|c| Point::new(f64::from(c[0]), f64::from(c[1]), f64::from(c[2]))),
        );
        triangles.extend(
            m.mesh.indices.chunks_exact(3).map(|c| [base + c[0] as usize, base + c[1] as usize, base + c[2] as usize]),
        );
    }
    Ok(TriMesh::new(vertices, triangles)?)
}

/// Loads `fixture:<name>` or a file chosen by extension; returns a display name too.
pub fn load_model(source: &str) -> Result<(String, SurfaceModel)> {
    if let Some(name) = source.strip_prefix("fixture:") {
        let model = fixtures::by_name(name).ok_or_else(|| CliError::Format(source.to_string()))?;
        return Ok((name.to_string(), model));
    }
    let path = PathBuf::from(source);
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| source.to_string());
    let ext = path.extension().map(|e| e.to_string_lossy().to_ascii_lowercase()).unwrap_or_default();
    let model = match ext.as_str() {
        "profile" => {
            let text = std::fs::read_to_string(&path).map_err(io_err(&path))?;
            SurfaceModel::Profile(parse_profile(&text, &path)?)
        }
        "stl" => SurfaceModel::Mesh(read_stl(&path)?),
        "obj" => SurfaceModel::Mesh(read_obj(&path)?),
        _ => return Err(CliError::Format(source.to_string())),
    };
    Ok((name, model))
}

pub fn mode_name(mode: ModelMode) -> &'static str {
    match mode {
        ModelMode::Profile2d => "profile2d",
        ModelMode::Mesh3d => "mesh3d",
    }
}
