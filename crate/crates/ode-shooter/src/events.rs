use radial_core::RadialProfile;
use serde::{Deserialize, Serialize};

/// Tracked jet components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    /// u′
    Du,
    /// Δu
    Lap,
    /// (Δu)′
    DLap,
    /// Δ²u
    Bilap,
}

impl Quantity {
    pub const ALL: [Quantity; 4] = [Quantity::Du, Quantity::Lap, Quantity::DLap, Quantity::Bilap];

    /// Index in the jet vector.
    pub fn index(self) -> usize {
        match self {
            Quantity::Du => 1,
            Quantity::Lap => 2,
            Quantity::DLap => 3,
            Quantity::Bilap => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// − to +
    Rising,
    /// + to −
    Falling,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub r: f64,
    pub direction: Direction,
}

/// Zero crossings of u′, Δu, (Δu)′ and Δ²u in increasing radius.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EventLog {
    pub du: Vec<Crossing>,
    pub lap: Vec<Crossing>,
    pub dlap: Vec<Crossing>,
    pub bilap: Vec<Crossing>,
}

/// The named radii of the case-iv sign structure.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ThetaArrays {
    pub theta1: Vec<f64>,
    pub theta1_tilde: Vec<f64>,
    pub theta2: Vec<f64>,
    pub theta2_tilde: Vec<f64>,
    pub theta3: Vec<f64>,
    pub theta4: Vec<f64>,
}

fn radii(v: &[Crossing], dir: Option<Direction>) -> Vec<f64> {
    v.iter()
        .filter(|c| dir.is_none_or(|d| c.direction == d))
        .map(|c| c.r)
        .collect()
}

impl EventLog {
    pub fn get(&self, q: Quantity) -> &Vec<Crossing> {
        match q {
            Quantity::Du => &self.du,
            Quantity::Lap => &self.lap,
            Quantity::DLap => &self.dlap,
            Quantity::Bilap => &self.bilap,
        }
    }

    pub fn get_mut(&mut self, q: Quantity) -> &mut Vec<Crossing> {
        match q {
            Quantity::Du => &mut self.du,
            Quantity::Lap => &mut self.lap,
            Quantity::DLap => &mut self.dlap,
            Quantity::Bilap => &mut self.bilap,
        }
    }

    pub fn is_empty(&self) -> bool {
        Quantity::ALL.iter().all(|q| self.get(*q).is_empty())
    }

    /// Local minima of u (u′ from − to +).
    pub fn theta1(&self) -> Option<f64> {
        radii(&self.du, Some(Direction::Rising)).first().copied()
    }

    /// Local maxima of u past θ₁.
    pub fn theta1_tilde(&self) -> Option<f64> {
        let t1 = self.theta1()?;
        radii(&self.du, Some(Direction::Falling))
            .into_iter()
            .find(|&r| r > t1)
    }

    pub fn theta2(&self) -> Option<f64> {
        radii(&self.lap, Some(Direction::Rising)).first().copied()
    }

    pub fn theta2_tilde(&self) -> Option<f64> {
        let t2 = self.theta2()?;
        radii(&self.lap, Some(Direction::Falling))
            .into_iter()
            .find(|&r| r > t2)
    }

    pub fn theta3(&self) -> Option<f64> {
        radii(&self.dlap, Some(Direction::Falling)).first().copied()
    }

    pub fn theta4(&self) -> Option<f64> {
        radii(&self.bilap, Some(Direction::Falling)).first().copied()
    }

    pub fn theta_arrays(&self) -> ThetaArrays {
        ThetaArrays {
            theta1: radii(&self.du, Some(Direction::Rising)),
            theta1_tilde: radii(&self.du, Some(Direction::Falling)),
            theta2: radii(&self.lap, Some(Direction::Rising)),
            theta2_tilde: radii(&self.lap, Some(Direction::Falling)),
            theta3: radii(&self.dlap, None),
            theta4: radii(&self.bilap, None),
        }
    }

    /// JSON with the named arrays `theta1 … theta4`.
    pub fn to_json(&self) -> String {
        serde_json_string(&self.theta_arrays())
    }

    /// Every radius multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> EventLog {
        let s = |v: &Vec<Crossing>| {
            v.iter()
                .map(|c| Crossing {
                    r: c.r * factor,
                    direction: c.direction,
                })
                .collect()
        };
        EventLog {
            du: s(&self.du),
            lap: s(&self.lap),
            dlap: s(&self.dlap),
            bilap: s(&self.bilap),
        }
    }

    /// Radii strictly increasing and directions alternating per quantity.
    pub fn is_consistent(&self) -> bool {
        Quantity::ALL.iter().all(|q| {
            self.get(*q).windows(2).all(|w| {
                w[1].r > w[0].r && w[1].direction != w[0].direction
            })
        })
    }
}

/// Crossings of a closed-form profile on `(r_lo, r_hi]`.
///
/// Samples geometrically and uniformly, then bisects each sign change on
/// the profile's own jet.
pub fn detect_events<P: RadialProfile + ?Sized>(
    profile: &P,
    r_lo: f64,
    r_hi: f64,
    samples: usize,
) -> EventLog {
    let n = samples.max(16);
    let mut rs: Vec<f64> = (0..=n)
        .map(|i| r_lo * (r_hi / r_lo).powf(i as f64 / n as f64))
        .chain((1..=n).map(|i| r_lo + (r_hi - r_lo) * i as f64 / n as f64))
        .collect();
    rs.sort_by(f64::total_cmp);
    rs.dedup();
    let mut log = EventLog::default();
    let jets: Vec<[f64; 6]> = rs.iter().map(|&r| profile.jet(r).w).collect();
    for q in Quantity::ALL {
        let i = q.index();
        let mut last = (rs[0], jets[0][i]);
        for (r, w) in rs.iter().zip(&jets).skip(1) {
            let v = w[i];
            if v == 0.0 || !v.is_finite() {
                continue;
            }
            if last.1 != 0.0 && v.signum() != last.1.signum() {
                let (mut a, mut b) = (last.0, *r);
                let sa = last.1.signum();
                while b - a > 1e-14 * b {
                    let m = 0.5 * (a + b);
                    let fm = profile.jet(m).w[i];
                    if fm == 0.0 {
                        a = m;
                        b = m;
                        break;
                    }
                    if fm.signum() == sa {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                let direction = if v > 0.0 {
                    Direction::Rising
                } else {
                    Direction::Falling
                };
                log.get_mut(q).push(Crossing {
                    r: 0.5 * (a + b),
                    direction,
                });
            }
            last = (*r, v);
        }
    }
    log
}

fn serde_json_string(t: &ThetaArrays) -> String {
    let arr = |v: &Vec<f64>| {
        let items: Vec<String> = v.iter().map(|x| format!("{x:.17e}")).collect();
        format!("[{}]", items.join(", "))
    };
    format!(
        "{{\n  \"theta1\": {},\n  \"theta1_tilde\": {},\n  \"theta2\": {},\n  \"theta2_tilde\": {},\n  \"theta3\": {},\n  \"theta4\": {}\n}}\n",
        arr(&t.theta1),
        arr(&t.theta1_tilde),
        arr(&t.theta2),
        arr(&t.theta2_tilde),
        arr(&t.theta3),
        arr(&t.theta4)
    )
}
