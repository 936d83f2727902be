use nalgebra::{Isometry3, Point3, Vector2, Vector3};

use super::body::{fictitious, reduced, Body};
use super::integrate::{integrate_step, LoadAccumulator};
use crate::error::{Error, Result};
use crate::friction::{
    legacy_roll_torque, roll_update, slide_update, spin_update, Curvature, FrictionParams, Mode, RollModel, RollState,
    SlideState, SpinLaw, SpinState,
};
use crate::geometry::{collide, normal_curvature, spin_curvature, ContactGeom, Shape};
use crate::kinematics::{
    continue_frame, displacement_vector, init_frame, slip_increment, spin_angle, ContactFrame, ContactTrack,
};
use crate::normal::NormalModel;
use crate::scalar::Real;

/// A body pair that may come into contact, with its contact laws.
#[derive(Debug, Clone, PartialEq)]
pub struct Interaction<T: Real> {
    /// Lower body index; the contact normal points into this body.
    pub i: usize,
    pub j: usize,
    pub friction: FrictionParams<T>,
    pub normal: NormalModel<T>,
}

/// Contact point and tangent axes stored in a body's own frame.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Anchor<T: Real> {
    point: Point3<T>,
    u: Vector3<T>,
    w: Vector3<T>,
}

impl<T: Real> Anchor<T> {
    fn new(pose: &Isometry3<T>, point: &Point3<T>, frame: &ContactFrame<T>) -> Self {
        Self {
            point: pose.inverse_transform_point(point),
            u: pose.rotation.inverse_transform_vector(&frame.u),
            w: pose.rotation.inverse_transform_vector(&frame.w),
        }
    }

    /// The stored record as carried by the body to its current pose.
    fn carried(&self, pose: &Isometry3<T>) -> ContactTrack<T> {
        let u = pose.rotation * self.u;
        let w = pose.rotation * self.w;
        ContactTrack {
            frame: ContactFrame { n: u.cross(&w), u, w },
            prev_point: pose * self.point,
            arc_len: T::zero(),
            p: Vector2::zeros(),
        }
    }
}

/// Friction state of a persisting contact.
#[derive(Debug, Clone, PartialEq)]
pub struct PairState<T: Real> {
    anchor_i: Anchor<T>,
    anchor_j: Anchor<T>,
    pub slide: SlideState<T>,
    pub roll_i: RollState<T>,
    pub roll_j: RollState<T>,
    pub spin: SpinState<T>,
    /// Steps since the contact formed.
    pub age: u64,
}

/// Per-step diagnostics of one contact. Loads are those acting on body `i`
/// unless labelled otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactReport<T: Real> {
    pub point: Point3<T>,
    pub normal: Vector3<T>,
    pub depth: T,
    pub normal_force: T,
    pub slide_elastic: Vector3<T>,
    pub slide_damping: Vector3<T>,
    pub roll_elastic_i: Vector3<T>,
    pub roll_damping_i: Vector3<T>,
    pub roll_elastic_j: Vector3<T>,
    pub roll_damping_j: Vector3<T>,
    pub spin_elastic: T,
    pub spin_damping: T,
    pub slide_mode: Mode,
    pub roll_mode_i: Mode,
    pub roll_mode_j: Mode,
    pub spin_mode: Mode,
    pub slide_history: T,
    pub roll_history_i: T,
    pub roll_history_j: T,
    pub spin_history: T,
    pub spin_angle: T,
    pub slip: T,
}

impl<T: Real> ContactReport<T> {
    fn empty(geom: &ContactGeom<T>) -> Self {
        let z = Vector3::zeros();
        Self {
            point: geom.point_j,
            normal: geom.normal.into_inner(),
            depth: geom.depth,
            normal_force: T::zero(),
            slide_elastic: z,
            slide_damping: z,
            roll_elastic_i: z,
            roll_damping_i: z,
            roll_elastic_j: z,
            roll_damping_j: z,
            spin_elastic: T::zero(),
            spin_damping: T::zero(),
            slide_mode: Mode::Static,
            roll_mode_i: Mode::Static,
            roll_mode_j: Mode::Static,
            spin_mode: Mode::Static,
            slide_history: T::zero(),
            roll_history_i: T::zero(),
            roll_history_j: T::zero(),
            spin_history: T::zero(),
            spin_angle: T::zero(),
            slip: T::zero(),
        }
    }

    /// Roll torque acting on body `j`.
    pub fn roll_torque_j(&self) -> Vector3<T> {
        self.roll_elastic_j + self.roll_damping_j
    }
}

/// Bodies, their pairwise contact laws and the friction state of every
/// active contact.
#[derive(Debug, Clone)]
pub struct World<T: Real> {
    pub bodies: Vec<Body<T>>,
    pub interactions: Vec<Interaction<T>>,
    pub gravity: Vector3<T>,
    /// Separation below which a contact is still reported.
    pub contact_margin: T,
    pub time: T,
    pub steps: u64,
    pairs: Vec<Option<PairState<T>>>,
    reports: Vec<Option<ContactReport<T>>>,
    loads: LoadAccumulator<T>,
}

impl<T: Real> World<T> {
    pub fn new(bodies: Vec<Body<T>>, interactions: Vec<Interaction<T>>, gravity: Vector3<T>) -> Result<Self> {
        for b in &bodies {
            b.shape.validate()?;
        }
        for it in &interactions {
            if it.i >= it.j || it.j >= bodies.len() {
                return Err(Error::param(
                    "interaction",
                    format!("invalid body pair ({}, {})", it.i, it.j),
                ));
            }
            if bodies[it.i].state.is_ground() && bodies[it.j].state.is_ground() {
                return Err(Error::param("interaction", "both bodies are ground"));
            }
            it.friction.validate()?;
            it.normal.validate()?;
        }
        let n = interactions.len();
        let loads = LoadAccumulator::new(bodies.len());
        Ok(Self {
            bodies,
            interactions,
            gravity,
            contact_margin: T::zero(),
            time: T::zero(),
            steps: 0,
            pairs: vec![None; n],
            reports: vec![None; n],
            loads,
        })
    }

    pub fn pair_state(&self, k: usize) -> Option<&PairState<T>> {
        self.pairs[k].as_ref()
    }

    pub fn report(&self, k: usize) -> Option<&ContactReport<T>> {
        self.reports[k].as_ref()
    }

    pub fn loads(&self) -> &LoadAccumulator<T> {
        &self.loads
    }

    /// Advances the world by one step.
    pub fn step(&mut self, dt: T) -> Result<()> {
        if !(dt > T::zero()) {
            return Err(Error::param("dt", "time step must be positive"));
        }
        self.contact_pipeline_step(dt)?;
        for (b, body) in self.bodies.iter().enumerate() {
            if let Some(m) = body.state.mass() {
                self.loads.add_force(b, &(self.gravity * m));
            }
        }
        if !self.loads.is_finite() {
            return Err(Error::NonFinite(format!("loads at t = {}", self.time)));
        }
        for (b, body) in self.bodies.iter_mut().enumerate() {
            integrate_step(&mut body.state, &self.loads.force[b], &self.loads.torque[b], dt)?;
        }
        self.time += dt;
        self.steps += 1;
        Ok(())
    }

    /// Detects contacts, updates every friction channel and fills the load
    /// accumulator with contact loads.
    pub fn contact_pipeline_step(&mut self, dt: T) -> Result<()> {
        self.loads.clear();
        for k in 0..self.interactions.len() {
            let it = &self.interactions[k];
            let (bi, bj) = (&self.bodies[it.i], &self.bodies[it.j]);
            let (pose_i, pose_j) = (bi.state.pose(), bj.state.pose());
            let Some(geom) = collide(&bi.shape, &pose_i, &bj.shape, &pose_j, self.contact_margin)? else {
                self.pairs[k] = None;
                self.reports[k] = None;
                continue;
            };
            let n = geom.normal.into_inner();
            let pair = match self.pairs[k].take() {
                Some(p) => p,
                None => {
                    let frame = init_frame(&n)?;
                    PairState {
                        anchor_i: Anchor::new(&pose_i, &geom.point_i, &frame),
                        anchor_j: Anchor::new(&pose_j, &geom.point_j, &frame),
                        slide: SlideState::default(),
                        roll_i: RollState::default(),
                        roll_j: RollState::default(),
                        spin: SpinState::default(),
                        age: 0,
                    }
                }
            };
            let (pair, report) = resolve_contact(bi, bj, it, &geom, pair, dt, &mut self.loads)?;
            self.pairs[k] = Some(pair);
            self.reports[k] = Some(report);
        }
        Ok(())
    }
}

fn curvature_or_zero<T: Real>(shape: &Shape<T>, pose: &Isometry3<T>, point: &Point3<T>, dir: &Vector3<T>) -> Result<T> {
    match shape {
        Shape::HalfSpace(_) => Ok(T::zero()),
        _ => normal_curvature(shape, pose, point, dir),
    }
}

fn mean_curvature<T: Real>(shape: &Shape<T>, pose: &Isometry3<T>, point: &Point3<T>) -> Result<T> {
    match shape {
        Shape::HalfSpace(_) => Ok(T::zero()),
        _ => spin_curvature(shape, pose, point),
    }
}

fn resolve_contact<T: Real>(
    bi: &Body<T>,
    bj: &Body<T>,
    it: &Interaction<T>,
    geom: &ContactGeom<T>,
    mut pair: PairState<T>,
    dt: T,
    loads: &mut LoadAccumulator<T>,
) -> Result<(PairState<T>, ContactReport<T>)> {
    let (si, sj) = (&bi.state, &bj.state);
    let (pose_i, pose_j) = (si.pose(), sj.pose());
    let n = geom.normal.into_inner();
    let params = &it.friction;

    // frames, spin angle and displacement vectors
    let track_i = pair.anchor_i.carried(&pose_i);
    let track_j = pair.anchor_j.carried(&pose_j);
    let frame = continue_frame(&track_i.frame.u, &track_i.frame.w, &n)?;
    let frame_j = continue_frame(&track_j.frame.u, &track_j.frame.w, &n)?;
    let psi = spin_angle(&frame, &frame_j)?;
    let (p_i, _) = displacement_vector(&track_i, &geom.point_i, &frame);
    // counter-spin: p_j keeps its coordinates when frame j is turned onto frame i
    let (p_j, _) = displacement_vector(&track_j, &geom.point_j, &frame_j);
    let ds = slip_increment(&p_i, &p_j);

    // normal force
    let k_mean =
        mean_curvature(&bi.shape, &pose_i, &geom.point_i)? + mean_curvature(&bj.shape, &pose_j, &geom.point_j)?;
    if !(k_mean > T::zero()) {
        return Err(Error::InvalidShape("contact between two flat surfaces".into()));
    }
    let r_eff = T::one() / k_mean;
    let m_red = reduced(si.mass(), sj.mass())?;
    let depth_rate = (sj.point_velocity(&geom.point_j) - si.point_velocity(&geom.point_i)).dot(&n);
    let normal = it.normal.evaluate(geom.depth, depth_rate, r_eff, m_red)?;
    let n_force = normal.force;

    let mut report = ContactReport::empty(geom);
    report.normal_force = n_force;
    report.spin_angle = psi;
    report.slip = ds.norm();

    let (ci, cj) = (si.center(), sj.center());
    loads.add_force_at(it.i, &(n * n_force), &geom.point_i, &ci);
    loads.add_force_at(it.j, &(-n * n_force), &geom.point_j, &cj);

    // slide
    let slide = slide_update(&mut pair.slide, &ds, n_force, params, dt)?;
    let f_e = frame.to_world(&slide.elastic);
    let f_d = frame.to_world(&slide.damping);
    let f = f_e + f_d;
    loads.add_force_at(it.i, &f, &geom.point_i, &ci);
    loads.add_force_at(it.j, &-f, &geom.point_j, &cj);
    report.slide_elastic = f_e;
    report.slide_damping = f_d;
    report.slide_mode = pair.slide.mode;
    report.slide_history = pair.slide.s.norm();

    // roll
    match params.roll_model {
        RollModel::History => {
            let inertia =
                |axis: &Vector3<T>| fictitious(si.inertia_about(axis), sj.inertia_about(axis)).unwrap_or(T::one());
            let sides = [
                (bi, &pose_i, &geom.point_i, bj, &pose_j, &geom.point_j, &p_i, -n),
                (bj, &pose_j, &geom.point_j, bi, &pose_i, &geom.point_i, &p_j, n),
            ];
            for (side, (own, own_pose, own_pt, other, other_pose, other_pt, p_b, outward)) in
                sides.into_iter().enumerate()
            {
                let state = if side == 0 { &mut pair.roll_i } else { &mut pair.roll_j };
                let tiny = T::lit(1e-100);
                let dir_plane = if p_b.norm() > tiny {
                    p_b.normalize()
                } else if state.theta.norm() > tiny {
                    state.theta.normalize()
                } else {
                    Vector2::x()
                };
                let dir = frame.to_world(&dir_plane);
                let k_own = curvature_or_zero(&own.shape, own_pose, own_pt, &dir)?;
                let k_other = curvature_or_zero(&other.shape, other_pose, other_pt, &dir)?;
                let out = roll_update(
                    state,
                    k_own,
                    Curvature::Finite(k_other),
                    p_b,
                    n_force,
                    &frame,
                    &outward,
                    inertia,
                    params,
                    dt,
                )?;
                let body = if side == 0 { it.i } else { it.j };
                loads.add_torque(body, &out.total());
                if side == 0 {
                    report.roll_elastic_i = out.elastic;
                    report.roll_damping_i = out.damping;
                    report.roll_mode_i = state.mode;
                    report.roll_history_i = state.theta.norm();
                } else {
                    report.roll_elastic_j = out.elastic;
                    report.roll_damping_j = out.damping;
                    report.roll_mode_j = state.mode;
                    report.roll_history_j = state.theta.norm();
                }
            }
        }
        RollModel::Legacy => {
            let rel = sj.angular_velocity - si.angular_velocity;
            let rolling = rel - n * n.dot(&rel);
            let m_j = legacy_roll_torque(&rolling, params.mu_r, r_eff, n_force, params.legacy_guard);
            let m_i = legacy_roll_torque(&-rolling, params.mu_r, r_eff, n_force, params.legacy_guard);
            loads.add_torque(it.i, &m_i);
            loads.add_torque(it.j, &m_j);
            report.roll_elastic_i = m_i;
            report.roll_elastic_j = m_j;
        }
    }

    // spin
    let law = SpinLaw::from_params(params, normal.patch_radius)?;
    let i_spin = fictitious(si.inertia_about(&n), sj.inertia_about(&n))?;
    let spin = spin_update(&mut pair.spin, psi, n_force, &law, i_spin, params, dt)?;
    loads.add_torque(it.i, &(n * spin.total()));
    loads.add_torque(it.j, &(-n * spin.total()));
    report.spin_elastic = spin.elastic;
    report.spin_damping = spin.damping;
    report.spin_mode = pair.spin.mode;
    report.spin_history = pair.spin.psi;

    // both bodies adopt the frame of body i
    pair.anchor_i = Anchor::new(&pose_i, &geom.point_i, &frame);
    pair.anchor_j = Anchor::new(&pose_j, &geom.point_j, &frame);
    pair.age += 1;
    Ok((pair, report))
}
