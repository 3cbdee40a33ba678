use crate::geometry::Vec2;

/// Circular target area a robot must reach with its centre of mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target {
    pub centre: Vec2,
    pub radius: f64,
}

impl Target {
    pub fn new(centre: Vec2, radius: f64) -> Self {
        Target { centre, radius }
    }

    #[inline]
    pub fn contains(&self, p: Vec2) -> bool {
        p.distance(self.centre) <= self.radius
    }
}
