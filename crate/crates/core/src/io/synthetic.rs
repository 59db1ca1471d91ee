use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::template::{motion_basis, neutral_face};
use crate::error::{Error, Result};
use crate::geometry::{LandmarkFrame, Point2D};
use crate::pipeline::{Class, Dataset, Repetition, Subject, Task};
use crate::seed::derive_seed;

/// Parameters of the synthetic landmark generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n_subjects_per_class: usize,
    pub reps_per_subject: usize,
    pub frames_per_rep: usize,
    /// Peak lip/jaw displacement in pixels for healthy controls.
    pub motion_amplitude_hc: f64,
    pub motion_amplitude_als: f64,
    pub noise_sigma: f64,
    pub seed: u64,
    pub task: Task,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n_subjects_per_class: 6,
            reps_per_subject: 4,
            frames_per_rep: 30,
            motion_amplitude_hc: 20.0,
            motion_amplitude_als: 5.0,
            noise_sigma: 1.0,
            seed: 0,
            task: Task::Spread,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_subjects_per_class == 0 || self.reps_per_subject == 0 || self.frames_per_rep == 0
        {
            return Err(Error::Config("synthetic counts must be positive".into()));
        }
        let amps = [
            self.motion_amplitude_hc,
            self.motion_amplitude_als,
            self.noise_sigma,
        ];
        if amps.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(Error::Config(
                "amplitudes and noise must be finite and non-negative".into(),
            ));
        }
        Ok(())
    }
}

pub fn subject_id(group: Class, i: usize) -> String {
    format!("{}{:02}", group.as_str(), i + 1)
}

/// One open-and-close movement per repetition: frame `t` of `T` moves the
/// basis by `amplitude · sin(π (t + ½) / T)`, then adds isotropic Gaussian
/// noise. Subject `i` of each class draws from the same noise stream, so two
/// classes with equal amplitudes produce identical frames.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Dataset> {
    spec.validate()?;
    let face = neutral_face();
    let basis = motion_basis();
    let noise = Normal::new(0.0, spec.noise_sigma).map_err(|e| Error::Config(e.to_string()))?;
    let t_len = spec.frames_per_rep;

    let mut subjects = Vec::new();
    for group in [Class::Hc, Class::Als] {
        let amplitude = match group {
            Class::Hc => spec.motion_amplitude_hc,
            Class::Als => spec.motion_amplitude_als,
        };
        for i in 0..spec.n_subjects_per_class {
            let mut reps = Vec::with_capacity(spec.reps_per_subject);
            for r in 0..spec.reps_per_subject {
                let stream = derive_seed(spec.seed, (i * spec.reps_per_subject + r) as u64);
                let mut rng = ChaCha8Rng::seed_from_u64(stream);
                let frames = (0..t_len)
                    .map(|t| {
                        let phase = std::f64::consts::PI * (t as f64 + 0.5) / t_len as f64;
                        let d = amplitude * phase.sin();
                        let pts = face
                            .iter()
                            .zip(&basis)
                            .map(|(p, &(bx, by))| {
                                let (nx, ny) = if spec.noise_sigma > 0.0 {
                                    (noise.sample(&mut rng), noise.sample(&mut rng))
                                } else {
                                    (0.0, 0.0)
                                };
                                Point2D::new(p.x + d * bx + nx, p.y + d * by + ny)
                            })
                            .collect();
                        LandmarkFrame::new(pts, t as u32)
                    })
                    .collect::<Result<Vec<_>>>()?;
                reps.push(Repetition::new(
                    format!("r{:02}", r + 1),
                    spec.task,
                    group,
                    frames,
                )?);
            }
            subjects.push(Subject::new(subject_id(group, i), group, reps)?);
        }
    }
    Dataset::new(subjects, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(hc: f64, als: f64, sigma: f64) -> SyntheticSpec {
        SyntheticSpec {
            n_subjects_per_class: 4,
            reps_per_subject: 6,
            frames_per_rep: 15,
            motion_amplitude_hc: hc,
            motion_amplitude_als: als,
            noise_sigma: sigma,
            seed: 3,
            task: Task::Open,
        }
    }

    fn lip_opening(f: &LandmarkFrame) -> f64 {
        f.points()[66].y - f.points()[62].y
    }

    #[test]
    fn equal_amplitudes_without_noise_give_identical_classes() {
        let d = generate_synthetic(&spec(7.0, 7.0, 0.0)).unwrap();
        let hc = d.subject("HC01").unwrap();
        let als = d.subject("ALS01").unwrap();
        for (a, b) in hc.repetitions().iter().zip(als.repetitions()) {
            assert_eq!(a.frames(), b.frames());
        }
    }

    #[test]
    fn zero_amplitude_is_static() {
        let d = generate_synthetic(&spec(0.0, 0.0, 0.0)).unwrap();
        let face = neutral_face();
        for s in d.subjects() {
            for r in s.repetitions() {
                assert!(r.frames().iter().all(|f| f.points() == face.as_slice()));
            }
        }
    }

    #[test]
    fn healthy_subjects_open_the_mouth_further() {
        let d = generate_synthetic(&spec(20.0, 5.0, 1.0)).unwrap();
        let mean_range = |s: &Subject| {
            let ranges: Vec<f64> = s
                .repetitions()
                .iter()
                .map(|r| {
                    let o: Vec<f64> = r.frames().iter().map(lip_opening).collect();
                    o.iter().copied().fold(f64::MIN, f64::max)
                        - o.iter().copied().fold(f64::MAX, f64::min)
                })
                .collect();
            ranges.iter().sum::<f64>() / ranges.len() as f64
        };
        let hc_min = d
            .subjects()
            .iter()
            .filter(|s| s.group == Class::Hc)
            .map(mean_range)
            .fold(f64::MAX, f64::min);
        let als_max = d
            .subjects()
            .iter()
            .filter(|s| s.group == Class::Als)
            .map(mean_range)
            .fold(f64::MIN, f64::max);
        assert!(hc_min > als_max, "{hc_min} vs {als_max}");
        assert_eq!(d.subjects().len(), 8);
    }

    #[test]
    fn deterministic_under_seed() {
        let a = generate_synthetic(&spec(20.0, 5.0, 1.0)).unwrap();
        let b = generate_synthetic(&spec(20.0, 5.0, 1.0)).unwrap();
        assert_eq!(a, b);
        let c = generate_synthetic(&SyntheticSpec {
            seed: 4,
            ..spec(20.0, 5.0, 1.0)
        })
        .unwrap();
        assert_ne!(a, c);
    }
}
