//! The `classify` report.

use std::fmt;

use serde::{Deserialize, Serialize};
use spherilink::classify::degeneracy_relations;
use spherilink::{
    adjacent_coeffs, amplitudes, classify, diagonal_coeffs, grashof, modulus_m, opposite_coeffs, Amplitudes,
    FCoeffs, GCoeffs, HCoeffs, SectorAngles, VertexType,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    #[serde(rename = "type")]
    pub vertex_type: VertexType,
    pub angles: SectorAngles,
    pub sigma: f64,
    pub orthodiagonal: bool,
    /// `α−β+γ−δ, α−β−γ+δ, α+β−γ−δ, α+β+γ+δ−2π`; the zeros decide the type.
    pub relations: [f64; 4],
    pub adjacent: FCoeffs,
    pub opposite: GCoeffs,
    pub diagonal: HCoeffs,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Amplitudes>,
    pub grashof: bool,
}

impl ClassifyReport {
    pub fn new(angles: &SectorAngles) -> Self {
        let class = classify(angles);
        let elliptic = class.vertex_type == VertexType::Elliptic;
        let amps = amplitudes(angles);
        let finite = amps.to_array().iter().all(|p| p.value().re.is_finite() && p.value().im.is_finite());
        ClassifyReport {
            vertex_type: class.vertex_type,
            angles: *angles,
            sigma: angles.semi_perimeter(),
            orthodiagonal: class.orthodiagonal,
            relations: degeneracy_relations(angles),
            adjacent: adjacent_coeffs(angles),
            opposite: opposite_coeffs(angles),
            diagonal: diagonal_coeffs(angles),
            m: if elliptic { modulus_m(angles).ok() } else { None },
            amplitudes: (elliptic || class.vertex_type.is_conic()).then_some(amps).filter(|_| finite),
            grashof: grashof(angles).grashof,
        }
    }
}

impl fmt::Display for ClassifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, g, d] = self.angles.to_array();
        writeln!(f, "{}", self.vertex_type.name())?;
        writeln!(f, "angles        {a} {b} {g} {d}")?;
        writeln!(f, "sigma         {}", self.sigma)?;
        writeln!(f, "orthodiagonal {}", self.orthodiagonal)?;
        writeln!(f, "grashof       {}", self.grashof)?;
        let [r0, r1, r2, r3] = self.relations;
        writeln!(f, "relations     {r0:e} {r1:e} {r2:e} {r3:e}")?;
        let FCoeffs { f22, f20, f11, f02, f00 } = self.adjacent;
        writeln!(f, "adjacent      f22={f22} f20={f20} f11={f11} f02={f02} f00={f00}")?;
        let GCoeffs { g22, g20, g02, g00 } = self.opposite;
        writeln!(f, "opposite      g22={g22} g20={g20} g02={g02} g00={g00}")?;
        let HCoeffs { h11, h10, h01, h00 } = self.diagonal;
        writeln!(f, "diagonal      h11={h11} h10={h10} h01={h01} h00={h00}")?;
        if let Some(m) = self.m {
            writeln!(f, "M             {m}")?;
        }
        if let Some(amps) = &self.amplitudes {
            write!(f, "amplitudes   ")?;
            for (name, p) in ["px", "py", "pz", "pw"].iter().zip(amps.to_array()) {
                let c = p.value();
                if c.im == 0.0 {
                    write!(f, " {name}={}", c.re)?;
                } else {
                    write!(f, " {name}={}i", c.im)?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_line_names_the_type() {
        let a = SectorAngles::from_degrees(60.0, 60.0, 60.0, 60.0).unwrap();
        let text = ClassifyReport::new(&a).to_string();
        assert_eq!(text.lines().next(), Some("Rhombus"));
        assert!(!text.contains("M "));
    }

    #[test]
    fn elliptic_carries_modulus_and_amplitudes() {
        let a = SectorAngles::from_degrees(60.0, 90.0, 72.0, 45.0).unwrap();
        let r = ClassifyReport::new(&a);
        assert_eq!(r.m, Some(modulus_m(&a).unwrap()));
        assert!(r.amplitudes.is_some());
        assert!(r.to_string().contains("\nM "));
    }
}
