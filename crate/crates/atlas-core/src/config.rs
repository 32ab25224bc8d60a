//! All tunable tolerances in one place. Defaults follow the working values
//! used throughout; every field can be overridden from the CLI config layer.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Default absolute evaluation tolerance for series values.
    pub eval: f64,
    /// Level-set defect tolerance for refined curve points (relative to 1+|f|).
    pub geometry: f64,
    /// Residual |target| below which a refined zero is certified.
    pub zero_residual: f64,
    /// Newton step size declaring convergence (relative to 1+|s|).
    pub newton_step: f64,
    /// Distance tolerance for verifier checks in s-units.
    pub distance: f64,
    /// Angle tolerance for intertwining checks, radians.
    pub angle: f64,
    /// Factor in the double-zero first-stage test |f'| < factor (1 + |f''| |box|).
    pub order_factor: f64,
    /// Boxes at or below this diameter holding two zeros are treated as a
    /// double-zero candidate rather than subdivided further.
    pub double_zero_scale: f64,
    /// |f'| below this has the tracer shrink its step (branch-point vicinity).
    pub branch_step_threshold: f64,
    /// Clearance kept from domain boundaries by involution continuation paths.
    pub involution_clearance: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eval: 1e-10,
            geometry: 1e-6,
            zero_residual: 1e-8,
            newton_step: 1e-12,
            distance: 1e-5,
            angle: 1e-3,
            order_factor: 1e-4,
            double_zero_scale: 1e-3,
            branch_step_threshold: 0.05,
            involution_clearance: 1e-3,
        }
    }
}

impl Tolerances {
    /// Parse `key = value` overrides in the layered-config text format.
    pub fn apply_text(&mut self, text: &str) -> Result<(), String> {
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('[') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(format!("bad config line `{line}`"));
            };
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| format!("bad number in `{line}`"))?;
            match k.trim() {
                "eval" => self.eval = v,
                "geometry" => self.geometry = v,
                "zero_residual" => self.zero_residual = v,
                "newton_step" => self.newton_step = v,
                "distance" => self.distance = v,
                "angle" => self.angle = v,
                "order_factor" => self.order_factor = v,
                "double_zero_scale" => self.double_zero_scale = v,
                "branch_step_threshold" => self.branch_step_threshold = v,
                "involution_clearance" => self.involution_clearance = v,
                other => return Err(format!("unknown tolerance `{other}`")),
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::Tolerances;

    #[test]
    fn text_overrides() {
        let mut t = Tolerances::default();
        t.apply_text("# comment\n[tolerances]\ngeometry = 1e-7\nangle=2e-3\n")
            .unwrap();
        assert_eq!(t.geometry, 1e-7);
        assert_eq!(t.angle, 2e-3);
        assert!(t.apply_text("nonsense = 1").is_err());
    }
}
