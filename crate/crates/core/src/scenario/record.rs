use std::io::Write;

use crate::dynamics::{ContactReport, World};
use crate::error::Result;
use crate::friction::Mode;
use crate::scalar::Real;

fn arr<T: Real>(v: &nalgebra::Vector3<T>) -> [f64; 3] {
    [v.x.as_f64(), v.y.as_f64(), v.z.as_f64()]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodySample {
    pub position: [f64; 3],
    /// `[w, x, y, z]`.
    pub orientation: [f64; 4],
    pub velocity: [f64; 3],
    pub angular_velocity: [f64; 3],
}

/// Contact loads on body `i` (roll torques per body) and friction states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactSample {
    pub depth: f64,
    pub normal: [f64; 3],
    pub normal_force: f64,
    pub slide_elastic: [f64; 3],
    pub slide_damping: [f64; 3],
    pub roll_elastic_i: [f64; 3],
    pub roll_damping_i: [f64; 3],
    pub roll_elastic_j: [f64; 3],
    pub roll_damping_j: [f64; 3],
    pub spin_elastic: f64,
    pub spin_damping: f64,
    pub slide_mode: Mode,
    pub roll_mode_i: Mode,
    pub roll_mode_j: Mode,
    pub spin_mode: Mode,
    pub slide_history: f64,
    pub roll_history_i: f64,
    pub roll_history_j: f64,
    pub spin_history: f64,
}

impl ContactSample {
    pub fn from_report<T: Real>(r: &ContactReport<T>) -> Self {
        Self {
            depth: r.depth.as_f64(),
            normal: arr(&r.normal),
            normal_force: r.normal_force.as_f64(),
            slide_elastic: arr(&r.slide_elastic),
            slide_damping: arr(&r.slide_damping),
            roll_elastic_i: arr(&r.roll_elastic_i),
            roll_damping_i: arr(&r.roll_damping_i),
            roll_elastic_j: arr(&r.roll_elastic_j),
            roll_damping_j: arr(&r.roll_damping_j),
            spin_elastic: r.spin_elastic.as_f64(),
            spin_damping: r.spin_damping.as_f64(),
            slide_mode: r.slide_mode,
            roll_mode_i: r.roll_mode_i,
            roll_mode_j: r.roll_mode_j,
            spin_mode: r.spin_mode,
            slide_history: r.slide_history.as_f64(),
            roll_history_i: r.roll_history_i.as_f64(),
            roll_history_j: r.roll_history_j.as_f64(),
            spin_history: r.spin_history.as_f64(),
        }
    }

    /// Roll torque on body `j`.
    pub fn roll_torque_j(&self) -> [f64; 3] {
        std::array::from_fn(|k| self.roll_elastic_j[k] + self.roll_damping_j[k])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub step: u64,
    /// Dynamic bodies only, in world order.
    pub bodies: Vec<BodySample>,
    /// One entry per interaction; `None` while out of contact.
    pub contacts: Vec<Option<ContactSample>>,
}

impl Sample {
    pub fn capture<T: Real>(world: &World<T>) -> Self {
        let bodies = world
            .bodies
            .iter()
            .filter(|b| !b.state.is_ground())
            .map(|b| {
                let s = &b.state;
                let q = s.orientation.quaternion();
                BodySample {
                    position: arr(&s.position),
                    orientation: [q.w.as_f64(), q.i.as_f64(), q.j.as_f64(), q.k.as_f64()],
                    velocity: arr(&s.velocity),
                    angular_velocity: arr(&s.angular_velocity),
                }
            })
            .collect();
        let contacts = (0..world.interactions.len())
            .map(|k| world.report(k).map(ContactSample::from_report))
            .collect();
        Self {
            t: world.time.as_f64(),
            step: world.steps,
            bodies,
            contacts,
        }
    }
}

/// Recorded run with a fixed column layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub body_names: Vec<String>,
    pub contact_names: Vec<String>,
    pub samples: Vec<Sample>,
}

/// Float with 17 significant digits and a `.` decimal separator.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn mode_label(m: Mode) -> &'static str {
    m.label()
}

const BODY_COLUMNS: [&str; 13] = [
    "x", "y", "z", "qw", "qx", "qy", "qz", "vx", "vy", "vz", "wx", "wy", "wz",
];
const CONTACT_COLUMNS: [&str; 31] = [
    "in_contact",
    "depth",
    "normal_force",
    "slide_fx",
    "slide_fy",
    "slide_fz",
    "slide_dx",
    "slide_dy",
    "slide_dz",
    "roll_i_x",
    "roll_i_y",
    "roll_i_z",
    "roll_i_dx",
    "roll_i_dy",
    "roll_i_dz",
    "roll_j_x",
    "roll_j_y",
    "roll_j_z",
    "roll_j_dx",
    "roll_j_dy",
    "roll_j_dz",
    "spin_torque",
    "spin_damping",
    "slide_mode",
    "roll_mode_i",
    "roll_mode_j",
    "spin_mode",
    "slide_history",
    "roll_history_i",
    "roll_history_j",
    "spin_history",
];

impl Trajectory {
    pub fn new<T: Real>(world: &World<T>) -> Self {
        let body_names = world
            .bodies
            .iter()
            .filter(|b| !b.state.is_ground())
            .map(|b| b.name.clone())
            .collect();
        let contact_names = world
            .interactions
            .iter()
            .map(|it| format!("{}-{}", world.bodies[it.i].name, world.bodies[it.j].name))
            .collect();
        Self {
            body_names,
            contact_names,
            samples: Vec::new(),
        }
    }

    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["t".to_string(), "step".to_string()];
        for b in &self.body_names {
            h.extend(BODY_COLUMNS.iter().map(|c| format!("{b}.{c}")));
        }
        for c in &self.contact_names {
            h.extend(CONTACT_COLUMNS.iter().map(|col| format!("{c}.{col}")));
        }
        h
    }

    fn row(s: &Sample) -> Vec<String> {
        let mut r = vec![fmt_f64(s.t), s.step.to_string()];
        for b in &s.bodies {
            let nums = b
                .position
                .iter()
                .chain(&b.orientation)
                .chain(&b.velocity)
                .chain(&b.angular_velocity);
            r.extend(nums.map(|&x| fmt_f64(x)));
        }
        for c in &s.contacts {
            match c {
                None => {
                    r.push("0".into());
                    r.extend(std::iter::repeat_n(String::new(), CONTACT_COLUMNS.len() - 1));
                }
                Some(c) => {
                    r.push("1".into());
                    let nums = [c.depth, c.normal_force]
                        .into_iter()
                        .chain(c.slide_elastic)
                        .chain(c.slide_damping)
                        .chain(c.roll_elastic_i)
                        .chain(c.roll_damping_i)
                        .chain(c.roll_elastic_j)
                        .chain(c.roll_damping_j)
                        .chain([c.spin_elastic, c.spin_damping]);
                    r.extend(nums.map(fmt_f64));
                    r.extend(
                        [c.slide_mode, c.roll_mode_i, c.roll_mode_j, c.spin_mode].map(|m| mode_label(m).to_string()),
                    );
                    r.extend([c.slide_history, c.roll_history_i, c.roll_history_j, c.spin_history].map(fmt_f64));
                }
            }
        }
        r
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.header())?;
        for s in &self.samples {
            w.write_record(Self::row(s))?;
        }
        w.flush()?;
        Ok(())
    }
}
