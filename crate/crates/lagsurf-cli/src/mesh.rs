//! Wavefront OBJ export: vertices from an R^4 -> R^3 projection, quad cells
//! as triangle pairs with counterclockwise winding in (s, t), and leaf
//! circles as optional polyline groups.

use anyhow::Context;
use std::io::Write;

use lagsurf::{GridSpec, ImmersionSpec, PointC2};

use crate::config::Projection;

pub fn project(p: &PointC2, projection: Projection) -> [f64; 3] {
    match projection {
        Projection::Re1Im1Re2 => [p.z1.re, p.z1.im, p.z2.re],
        Projection::Re1Re2Im2 => [p.z1.re, p.z2.re, p.z2.im],
        Projection::Stereographic => {
            let n = p.norm().max(1e-300);
            let (a, b, c, d) = (p.z1.re / n, p.z1.im / n, p.z2.re / n, p.z2.im / n);
            let w = (1.0 - d).max(1e-9);
            [a / w, b / w, c / w]
        }
    }
}

pub struct MeshStats {
    pub vertices: usize,
    pub triangles: usize,
    pub circle_polylines: usize,
}

/// Sample the surface over the grid and write an OBJ file atomically
/// (temp file + rename). Vertex count is exactly n_s * n_t.
pub fn write_obj(
    spec: &ImmersionSpec,
    grid: &GridSpec,
    projection: Projection,
    with_circles: bool,
    path: &std::path::Path,
) -> anyhow::Result<MeshStats> {
    let periodic = spec.periodic_t();
    let s_nodes = grid.s_nodes();
    let t_nodes = grid.t_nodes(periodic);
    let (n_s, n_t) = (s_nodes.len(), t_nodes.len());
    let mut verts = Vec::with_capacity(n_s * n_t);
    for &s in &s_nodes {
        for &t in &t_nodes {
            let p = spec
                .position(s, t)
                .with_context(|| format!("sampling surface at ({s}, {t})"))?;
            verts.push(project(&p, projection));
        }
    }
    let mut out = String::new();
    out.push_str(&format!("o {}\n", spec.family_name()));
    for v in &verts {
        out.push_str(&format!("v {:.16e} {:.16e} {:.16e}\n", v[0], v[1], v[2]));
    }
    let idx = |i: usize, j: usize| i * n_t + j + 1; // OBJ indices are 1-based
    let mut triangles = 0usize;
    let t_cells = if periodic { n_t } else { n_t - 1 };
    for i in 0..n_s - 1 {
        for j in 0..t_cells {
            let jn = (j + 1) % n_t;
            // Counterclockwise in (s, t).
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, jn), idx(i, jn));
            out.push_str(&format!("f {a} {b} {c}\n"));
            out.push_str(&format!("f {a} {c} {d}\n"));
            triangles += 2;
        }
    }
    let mut circle_polylines = 0usize;
    if with_circles && periodic {
        out.push_str("g circles\n");
        for i in 0..n_s {
            let indices: Vec<String> = (0..n_t)
                .chain(std::iter::once(0))
                .map(|j| idx(i, j).to_string())
                .collect();
            out.push_str(&format!("l {}\n", indices.join(" ")));
            circle_polylines += 1;
        }
    }
    let tmp = path.with_extension("obj.tmp");
    {
        let mut file = std::fs::File::create(&tmp)
            .with_context(|| format!("creating {}", tmp.display()))?;
        file.write_all(out.as_bytes())?;
        file.sync_all()?;
    }
    std::fs::rename(&tmp, path)
        .with_context(|| format!("moving mesh into place at {}", path.display()))?;
    Ok(MeshStats {
        vertices: verts.len(),
        triangles,
        circle_polylines,
    })
}
