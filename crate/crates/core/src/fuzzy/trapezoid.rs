use super::FuzzyError;

/// Trapezoidal membership function with support `[x0, x3]` and core
/// `[x1, x2]`. Equal neighbouring breakpoints give shoulders (`x0 == x1`,
/// `x2 == x3`) or a triangle (`x1 == x2`).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Trapezoid {
    x0: f64,
    x1: f64,
    x2: f64,
    x3: f64,
}

impl Trapezoid {
    pub fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Result<Self, FuzzyError> {
        let ordered = x0 <= x1 && x1 <= x2 && x2 <= x3;
        let finite = [x0, x1, x2, x3].iter().all(|v| v.is_finite());
        if !(ordered && finite) {
            return Err(FuzzyError::Breakpoints([x0, x1, x2, x3]));
        }
        Ok(Trapezoid { x0, x1, x2, x3 })
    }

    pub fn breakpoints(&self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    /// `max(min((x - x0)/(x1 - x0), 1, (x3 - x)/(x3 - x2)), 0)`, with a
    /// zero-width side counting as fully satisfied inside the support.
    pub fn eval(&self, x: f64) -> f64 {
        if !(x >= self.x0 && x <= self.x3) {
            return 0.0;
        }
        let rise = if self.x1 > self.x0 {
            (x - self.x0) / (self.x1 - self.x0)
        } else {
            1.0
        };
        let fall = if self.x3 > self.x2 {
            (self.x3 - x) / (self.x3 - self.x2)
        } else {
            1.0
        };
        rise.min(1.0).min(fall).max(0.0)
    }

    /// Corners of a copy clipped at `level`.
    pub(crate) fn clip_points(&self, level: f64) -> [f64; 2] {
        [
            self.x0 + level * (self.x1 - self.x0),
            self.x3 - level * (self.x3 - self.x2),
        ]
    }

    /// Centre of gravity of the unclipped shape.
    pub fn centroid(&self) -> f64 {
        let [x0, x1, x2, x3] = self.breakpoints();
        if x3 == x0 {
            return x0;
        }
        // Rising triangle, core rectangle, falling triangle.
        let pieces = [
            ((x1 - x0) / 2.0, x0 + 2.0 * (x1 - x0) / 3.0),
            (x2 - x1, (x1 + x2) / 2.0),
            ((x3 - x2) / 2.0, x2 + (x3 - x2) / 3.0),
        ];
        let area: f64 = pieces.iter().map(|p| p.0).sum();
        pieces.iter().map(|p| p.0 * p.1).sum::<f64>() / area
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn medium() -> Trapezoid {
        Trapezoid::new(0.25, 0.45, 0.55, 0.75).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(medium().eval(0.45), 1.0);
        assert_eq!(medium().eval(0.25), 0.0);
        assert!((medium().eval(0.35) - 0.5).abs() < 1e-12);
        assert_eq!(medium().eval(0.75), 0.0);
        assert_eq!(medium().eval(0.55), 1.0);
        assert_eq!(medium().eval(2.0), 0.0);
        assert_eq!(medium().eval(f64::NAN), 0.0);
    }

    #[test]
    fn shoulders() {
        let low = Trapezoid::new(0.0, 0.0, 0.25, 0.5).unwrap();
        assert_eq!(low.eval(0.0), 1.0);
        assert_eq!(low.eval(0.25), 1.0);
        assert_eq!(low.eval(0.375), 0.5);
        let high = Trapezoid::new(0.5, 0.75, 1.0, 1.0).unwrap();
        assert_eq!(high.eval(1.0), 1.0);
        assert_eq!(high.eval(0.5), 0.0);
    }

    #[test]
    fn singleton() {
        let s = Trapezoid::new(0.3, 0.3, 0.3, 0.3).unwrap();
        assert_eq!(s.eval(0.3), 1.0);
        assert_eq!(s.eval(0.30001), 0.0);
        assert_eq!(s.centroid(), 0.3);
    }

    #[test]
    fn rejects_disorder() {
        assert!(Trapezoid::new(0.5, 0.4, 0.6, 0.7).is_err());
        assert!(Trapezoid::new(0.0, 0.1, f64::NAN, 0.7).is_err());
    }

    #[test]
    fn centroids() {
        assert!((medium().centroid() - 0.5).abs() < 1e-15);
        let w = Trapezoid::new(0.1, 0.2, 0.3, 0.4).unwrap();
        assert!((w.centroid() - 0.25).abs() < 1e-15);
        // Right triangle (0,0,0,1): centroid at 1/3.
        let t = Trapezoid::new(0.0, 0.0, 0.0, 1.0).unwrap();
        assert!((t.centroid() - 1.0 / 3.0).abs() < 1e-15);
    }
}
