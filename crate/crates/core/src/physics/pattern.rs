use crate::error::{Error, Result};

/// Uniform-thickness sequence of domain orientations, each `+1` or `-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainPattern {
    thickness_um: f64,
    signs: Vec<i8>,
}

impl DomainPattern {
    pub fn new(thickness_um: f64, signs: Vec<i8>) -> Result<Self> {
        if !(thickness_um.is_finite() && thickness_um > 0.0) {
            return Err(Error::InvalidPattern(format!(
                "thickness must be positive and finite, got {thickness_um}"
            )));
        }
        if signs.is_empty() {
            return Err(Error::InvalidPattern("pattern has no domains".into()));
        }
        if let Some(pos) = signs.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidPattern(format!(
                "domain {pos} has orientation {}, expected +1 or -1",
                signs[pos]
            )));
        }
        Ok(Self {
            thickness_um,
            signs,
        })
    }

    /// All domains pointing up.
    pub fn uniform(thickness_um: f64, count: usize) -> Result<Self> {
        Self::new(thickness_um, vec![1; count])
    }

    /// Alternating blocks of `block` domains, starting with `+1`.
    pub fn periodic(thickness_um: f64, count: usize, block: usize) -> Result<Self> {
        let block = block.max(1);
        let signs = (0..count)
            .map(|j| if (j / block).is_multiple_of(2) { 1 } else { -1 })
            .collect();
        Self::new(thickness_um, signs)
    }

    pub fn thickness_um(&self) -> f64 {
        self.thickness_um
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn length_um(&self) -> f64 {
        self.signs.len() as f64 * self.thickness_um
    }

    /// Left edge of domain `j`, from the integer index (never accumulated).
    #[inline]
    pub fn boundary_um(&self, j: usize) -> f64 {
        j as f64 * self.thickness_um
    }

    /// The globally inverted pattern.
    pub fn flipped(&self) -> Self {
        Self {
            thickness_um: self.thickness_um,
            signs: self.signs.iter().map(|s| -s).collect(),
        }
    }
}
