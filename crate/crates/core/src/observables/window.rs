use crate::error::{Error, Result};

/// Number basis `|0>, ..., |K-1>` of a truncated single-mode Fock space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockWindow {
    dim: usize,
}

impl FockWindow {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("Fock window needs dimension >= 1".into()));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Fourier basis `e_kmin, ..., e_kmax` of `L²(T)`; always contains `e_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusWindow {
    kmin: i64,
    kmax: i64,
}

impl TorusWindow {
    pub fn new(kmin: i64, kmax: i64) -> Result<Self> {
        if kmin > 0 || kmax < 0 {
            return Err(Error::InvalidInput(format!(
                "torus window [{kmin}, {kmax}] must contain index 0"
            )));
        }
        Ok(Self { kmin, kmax })
    }

    /// `[-k, k]`.
    pub fn symmetric(k: usize) -> Self {
        Self { kmin: -(k as i64), kmax: k as i64 }
    }

    pub fn kmin(&self) -> i64 {
        self.kmin
    }

    pub fn kmax(&self) -> i64 {
        self.kmax
    }

    pub fn dim(&self) -> usize {
        (self.kmax - self.kmin + 1) as usize
    }
}

/// Either kind of basis window, addressed by integer labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    Fock(FockWindow),
    Torus(TorusWindow),
}

impl Window {
    pub fn dim(&self) -> usize {
        match self {
            Window::Fock(w) => w.dim(),
            Window::Torus(w) => w.dim(),
        }
    }

    /// Label of the first basis vector.
    pub fn offset(&self) -> i64 {
        match self {
            Window::Fock(_) => 0,
            Window::Torus(w) => w.kmin(),
        }
    }

    /// Label of row `i`.
    pub fn label(&self, i: usize) -> i64 {
        self.offset() + i as i64
    }

    pub fn labels(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.dim()).map(move |i| self.label(i))
    }

    /// Row of the basis vector labelled `k`, if it is inside the window.
    pub fn position(&self, k: i64) -> Option<usize> {
        let i = k - self.offset();
        (i >= 0 && (i as usize) < self.dim()).then_some(i as usize)
    }

    pub fn require_position(&self, k: i64) -> Result<usize> {
        self.position(k).ok_or_else(|| Error::OutOfWindow { index: k, window: self.describe() })
    }

    pub fn describe(&self) -> String {
        match self {
            Window::Fock(w) => format!("fock[0, {}]", w.dim() - 1),
            Window::Torus(w) => format!("torus[{}, {}]", w.kmin(), w.kmax()),
        }
    }
}

impl From<FockWindow> for Window {
    fn from(w: FockWindow) -> Self {
        Window::Fock(w)
    }
}

impl From<TorusWindow> for Window {
    fn from(w: TorusWindow) -> Self {
        Window::Torus(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_validate() {
        assert!(FockWindow::new(0).is_err());
        assert!(TorusWindow::new(1, 3).is_err());
        assert!(TorusWindow::new(-3, -1).is_err());
        let w = TorusWindow::new(-2, 1).unwrap();
        assert_eq!(w.dim(), 4);
    }

    #[test]
    fn labels_and_positions() {
        let w = Window::from(TorusWindow::symmetric(2));
        assert_eq!(w.labels().collect::<Vec<_>>(), vec![-2, -1, 0, 1, 2]);
        assert_eq!(w.position(0), Some(2));
        assert_eq!(w.position(3), None);
        let f = Window::from(FockWindow::new(3).unwrap());
        assert_eq!(f.position(-1), None);
        assert!(matches!(f.require_position(3), Err(Error::OutOfWindow { index: 3, .. })));
    }
}
