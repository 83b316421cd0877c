use crate::linalg::{Matrix, SubspaceBasis};
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FlagAction {
    Stabilizes,
    Raises,
    Neither,
}

impl fmt::Display for FlagAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FlagAction::Stabilizes => "stabilizes",
            FlagAction::Raises => "raises",
            FlagAction::Neither => "neither",
        })
    }
}

/// Classifies `psi` against a flag `F_0 ⊂ ... ⊂ F_d`.
///
/// A map that stabilizes also raises; only the stronger answer is reported.
pub fn flag_action(psi: &Matrix, flag: &[SubspaceBasis]) -> FlagAction {
    let images: Vec<SubspaceBasis> = flag.iter().map(|f| f.image(psi)).collect();
    let inside = |img: &SubspaceBasis, f: &SubspaceBasis| f.contains(img).unwrap_or(false);
    if images.iter().zip(flag).all(|(img, f)| inside(img, f)) {
        return FlagAction::Stabilizes;
    }
    let d = flag.len().saturating_sub(1);
    if (0..d).all(|i| inside(&images[i], &flag[i + 1])) {
        return FlagAction::Raises;
    }
    FlagAction::Neither
}
