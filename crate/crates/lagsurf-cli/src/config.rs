//! JSON scene configuration: one surface, a grid, a list of checks and
//! optional file outputs.

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use lagsurf::{GridSpec, ImmersionSpec};

#[derive(Debug, Deserialize, Serialize)]
pub struct SceneConfig {
    pub surface: SurfaceSel,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub checks: Vec<CheckConfig>,
    #[serde(default)]
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Deserialize, Serialize)]
pub struct SurfaceSel {
    /// Catalog entry name.
    pub name: String,
    /// Numeric arguments for the entry (defaults applied from the catalog).
    #[serde(default)]
    pub args: Vec<f64>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
pub struct GridConfig {
    pub n_s: Option<usize>,
    pub n_t: Option<usize>,
    pub s_range: Option<(f64, f64)>,
    pub t_range: Option<(f64, f64)>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CheckConfig {
    Lagrangian,
    SelfSimilar { lambda: f64 },
    HamiltonianStationary,
    R2k,
    Constraints,
}

#[derive(Debug, Deserialize, Serialize)]
pub struct OutputConfig {
    #[serde(default)]
    pub formats: Vec<String>,
    pub path: Option<String>,
    #[serde(default)]
    pub projection: Projection,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Projection {
    /// (Re z1, Im z1, Re z2) - drop Im z2.
    #[default]
    Re1Im1Re2,
    /// (Re z1, Re z2, Im z2) - drop Im z1.
    Re1Re2Im2,
    /// Normalize to S^3 and project stereographically from (0, 0, 0, 1).
    Stereographic,
}

impl SceneConfig {
    pub fn load(path: &std::path::Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: SceneConfig =
            serde_json::from_str(&text).with_context(|| "parsing scene config JSON")?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> anyhow::Result<()> {
        if let (Some(n_s), Some(n_t)) = (self.grid.n_s, self.grid.n_t) {
            if n_s < 8 || n_t < 8 {
                bail!("grid sizes must be at least 8, got {n_s} x {n_t}");
            }
        }
        for r in [self.grid.s_range, self.grid.t_range].into_iter().flatten() {
            if !(r.0.is_finite() && r.1.is_finite() && r.1 > r.0) {
                bail!("grid ranges must be finite and increasing, got {r:?}");
            }
        }
        Ok(())
    }

    pub fn build_surface(&self) -> anyhow::Result<ImmersionSpec> {
        lagsurf::build_named(&self.surface.name, &self.surface.args)
            .with_context(|| format!("building surface '{}'", self.surface.name))
    }

    pub fn grid_for(&self, spec: &ImmersionSpec) -> GridSpec {
        let n_s = self.grid.n_s.unwrap_or(64);
        let n_t = self.grid.n_t.unwrap_or(64);
        let default = spec.default_grid(n_s, n_t);
        GridSpec::new(
            n_s,
            n_t,
            self.grid.s_range.unwrap_or(default.s_range),
            self.grid.t_range.unwrap_or(default.t_range),
        )
    }
}
