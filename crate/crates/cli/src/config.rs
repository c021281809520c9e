//! Run configuration read from TOML.

use crate::suites::Suite;
use anyhow::{bail, Context, Result};
use aqft::quadrature::{Quadrature, Rule};
use aqft::smatrix::SMatrixModel;
use aqft::warp::SpectralRep;
use aqft::{CMatrix, C64};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Output directory; overridden by `--out`, falls back to `AQFT_OUT`.
    #[serde(default)]
    pub out_dir: Option<String>,
    /// Suites to run; empty means all.
    #[serde(default)]
    pub suites: Vec<Suite>,
    pub model: ModelConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub truncation: TruncationConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub policy: Policy,
    #[serde(default)]
    pub nuclearity: NuclearityConfig,
    #[serde(default)]
    pub warp: WarpConfig,
}

fn default_seed() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub m: usize,
    pub theta_max: f64,
    pub rule: Rule,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            m: 6,
            theta_max: 2.5,
            rule: Rule::Uniform,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationConfig {
    pub n_max: usize,
}

impl Default for TruncationConfig {
    fn default() -> Self {
        TruncationConfig { n_max: 3 }
    }
}

/// Tolerance ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Closed-form identities that hold to rounding (phases, warps, scattering factors).
    pub exact: f64,
    /// Phase identities between the warp and the S-matrix.
    pub phase: f64,
    /// S-matrix axioms on the sample grid.
    pub axiom: f64,
    /// Algebraic identities on pure grid data.
    pub algebraic: f64,
    /// Field identities on continued arguments.
    pub field: f64,
    /// Identities involving one analytic continuation plus quadrature.
    pub analytic: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            exact: 1e-12,
            phase: 1e-13,
            axiom: 1e-10,
            algebraic: 1e-9,
            field: 1e-8,
            analytic: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Policy {
    /// Count failing informational checks toward the exit status.
    pub strict_informational: bool,
}

impl Default for Policy {
    fn default() -> Self {
        Policy {
            strict_informational: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NuclearityConfig {
    /// Splitting distances for the scan; empty means ten points in `[0.5/m, 5/m]`.
    pub s_grid: Vec<f64>,
    pub degree: usize,
    /// Number of Gaussian generators; each sector map has rank up to the
    /// number of monomials of that degree.
    pub generators: usize,
}

impl Default for NuclearityConfig {
    fn default() -> Self {
        NuclearityConfig {
            s_grid: Vec::new(),
            degree: 2,
            generators: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WarpConfig {
    /// Extra representation checked by the warp suite besides the random instances.
    pub rep: Option<DeclaredRep>,
}

/// Translation representation given by its eigenbasis: column `k` of the
/// unitary `basis_re + i·basis_im` (rows listed) carries momentum `momenta[k]`.
/// The basis defaults to the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeclaredRep {
    pub momenta: Vec<Vec<f64>>,
    #[serde(default)]
    pub basis_re: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub basis_im: Option<Vec<Vec<f64>>>,
    /// `Q = [[0,κ],[κ,0]]` in the first two coordinates.
    #[serde(default = "default_kappa")]
    pub kappa: f64,
}

fn default_kappa() -> f64 {
    1.0
}

impl DeclaredRep {
    pub fn dim(&self) -> usize {
        self.momenta.first().map(|p| p.len()).unwrap_or(0)
    }

    pub fn build(&self) -> Result<SpectralRep> {
        let n = self.momenta.len();
        if n == 0 {
            bail!("warp.rep.momenta must not be empty");
        }
        let d = self.dim();
        if !(2..=4).contains(&d) || self.momenta.iter().any(|p| p.len() != d) {
            bail!("warp.rep.momenta entries must all have the same length between 2 and 4");
        }
        let part = |m: &Option<Vec<Vec<f64>>>,
                    key: &str,
                    default: fn(usize, usize) -> f64|
         -> Result<Vec<f64>> {
            match m {
                None => Ok((0..n * n).map(|k| default(k / n, k % n)).collect()),
                Some(rows) => {
                    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                        bail!("warp.rep.{key} must be {n}×{n}");
                    }
                    Ok(rows.iter().flatten().copied().collect())
                }
            }
        };
        let re = part(
            &self.basis_re,
            "basis_re",
            |i, j| if i == j { 1.0 } else { 0.0 },
        )?;
        let im = part(&self.basis_im, "basis_im", |_, _| 0.0)?;
        let basis = CMatrix::from_fn(n, n, |i, j| C64::new(re[i * n + j], im[i * n + j]));
        SpectralRep::from_eigenbasis(&basis, &self.momenta).context("warp.rep")
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).context("config does not parse")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Defaults for a named model.
    pub fn for_model(name: &str) -> Self {
        RunConfig {
            seed: default_seed(),
            out_dir: None,
            suites: Vec::new(),
            model: ModelConfig {
                name: name.into(),
                params: BTreeMap::new(),
            },
            grid: GridConfig::default(),
            truncation: TruncationConfig::default(),
            tolerances: Tolerances::default(),
            policy: Policy::default(),
            nuclearity: NuclearityConfig::default(),
            warp: WarpConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.m < 2 {
            bail!("grid.m must be at least 2, got {}", self.grid.m);
        }
        if !(self.grid.theta_max > 0.0 && self.grid.theta_max.is_finite()) {
            bail!(
                "grid.theta_max must be positive, got {}",
                self.grid.theta_max
            );
        }
        if self.truncation.n_max < 1 {
            bail!("truncation.n_max must be at least 1");
        }
        if self.truncation.n_max > aqft::fock::MAX_SECTOR {
            bail!(
                "truncation.n_max must be at most {}, got {}",
                aqft::fock::MAX_SECTOR,
                self.truncation.n_max
            );
        }
        let t = &self.tolerances;
        for (key, v) in [
            ("exact", t.exact),
            ("phase", t.phase),
            ("axiom", t.axiom),
            ("algebraic", t.algebraic),
            ("field", t.field),
            ("analytic", t.analytic),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                bail!("tolerances.{key} must be positive, got {v}");
            }
        }
        if self
            .nuclearity
            .s_grid
            .iter()
            .any(|&s| !(s > 0.0 && s.is_finite()))
        {
            bail!("nuclearity.s_grid entries must be positive");
        }
        if self.nuclearity.degree > 2 {
            bail!(
                "nuclearity.degree must be 0, 1 or 2, got {}",
                self.nuclearity.degree
            );
        }
        if self.nuclearity.generators < 1 {
            bail!("nuclearity.generators must be at least 1");
        }
        if let Some(rep) = &self.warp.rep {
            rep.build()?;
        }
        self.build_model().context("model")?;
        Ok(())
    }

    pub fn build_model(&self) -> Result<SMatrixModel> {
        Ok(SMatrixModel::builtin(&self.model.name, &self.model.params)?)
    }

    pub fn quadrature(&self) -> Quadrature {
        Quadrature::with_rule(self.grid.rule, self.grid.m, self.grid.theta_max)
    }

    /// Selected suites in dependency order.
    pub fn selected_suites(&self) -> Vec<Suite> {
        let all = Suite::ALL.to_vec();
        if self.suites.is_empty() {
            all
        } else {
            all.into_iter()
                .filter(|s| self.suites.contains(s))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let cfg = RunConfig::from_toml("[model]\nname = \"ising\"\n").unwrap();
        assert_eq!(cfg.grid, GridConfig::default());
        assert_eq!(cfg.truncation.n_max, 3);
        assert_eq!(cfg.selected_suites(), Suite::ALL.to_vec());
    }

    #[test]
    fn invalid_values_are_rejected_with_key() {
        let err = RunConfig::from_toml(
            "[model]\nname = \"ising\"\n[grid]\nm = 1\ntheta_max = 2.0\nrule = \"uniform\"\n",
        )
        .unwrap_err();
        assert!(format!("{err:#}").contains("grid.m"));
        let err = RunConfig::from_toml("[model]\nname = \"nope\"\n").unwrap_err();
        assert!(format!("{err:#}").contains("unknown model"));
        let err = RunConfig::from_toml("[model]\nname = \"ising\"\nbogus = 3\n").unwrap_err();
        assert!(format!("{err:#}").contains("bogus"));
    }

    #[test]
    fn declared_representation() {
        let text = "[model]\nname = \"free\"\n[warp.rep]\nmomenta = [[0.0, 0.0], [1.0, 0.5], [2.0, -1.0]]\nkappa = 0.5\n";
        let cfg = RunConfig::from_toml(text).unwrap();
        let rep = cfg.warp.rep.unwrap().build().unwrap();
        assert_eq!(rep.n, 3);
        assert!(rep.omega.is_some());
        let bad = "[model]\nname = \"free\"\n[warp.rep]\nmomenta = [[0.0, 0.0]]\nbasis_re = [[1.0, 0.0]]\n";
        assert!(format!("{:#}", RunConfig::from_toml(bad).unwrap_err()).contains("basis_re"));
    }

    #[test]
    fn suite_selection_keeps_dependency_order() {
        let cfg = RunConfig::from_toml(
            "suites = [\"nuclearity\", \"smatrix\"]\n[model]\nname = \"free\"\n",
        )
        .unwrap();
        assert_eq!(
            cfg.selected_suites(),
            vec![Suite::Smatrix, Suite::Nuclearity]
        );
    }
}
