//! Regenerates the synthetic fixtures under `fixtures/`.
//!
//! Every word vector is `mu + sum_d s_d * a_d + sum_c p_c * r_c + noise`
//! over orthonormal axes, so identity positions are known exactly. Survey
//! means are those positions plus a little noise, and labeling choices
//! depend on Evaluation distance alone.
//!
//!     cargo run -p belief-axes-cli --example make_fixtures -- fixtures

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

const DIM: usize = 32;
const BINARY: [&str; 4] = ["evaluation", "potency", "activity", "gender"];
const RACES: [&str; 4] = ["white", "black", "asian", "hispanic"];
const IDENTITIES: [&str; 20] = [
    "doctor", "nurse", "thug", "sister", "brother", "mother", "father", "teacher", "criminal", "athlete", "baby",
    "grandmother", "hero", "coward", "judge", "clerk", "police_officer", "senator", "farmer", "student",
];

/// (dimension, left words, right words); left is the low survey end.
const MATCHED: [(&str, &[&str], &[&str]); 4] = [
    ("evaluation", &["bad", "awful"], &["good", "nice"]),
    ("potency", &["powerless", "little"], &["powerful", "big"]),
    ("activity", &["slow", "quiet", "inactive"], &["fast", "noisy", "active"]),
    ("gender", &["male", "man"], &["female", "woman"]),
];
const PRIOR_GENDER: (&[&str], &[&str]) = (&["he", "him"], &["she", "her"]);
const AUGMENTED: [(&str, &[&str], &[&str]); 3] = [
    ("evaluation", &["terrible", "horrible"], &["great", "wonderful"]),
    ("potency", &["weak", "small"], &["strong", "large"]),
    ("activity", &["lazy", "calm"], &["energetic", "lively"]),
];

fn gaussian(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(r)).collect()
}

fn orthonormal(r: &mut ChaCha8Rng, k: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while basis.len() < k {
        let mut v = gaussian(r, DIM);
        for b in &basis {
            let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        basis.push(v.into_iter().map(|x| x / n).collect());
    }
    basis
}

struct World {
    axes: Vec<Vec<f64>>,
    races: Vec<Vec<f64>>,
    mu: Vec<f64>,
    /// Planted positions per identity: binary dims in [-0.9, 0.9], then race
    /// shares summing to 1.
    positions: Vec<([f64; 4], [f64; 4])>,
}

impl World {
    fn new(seed: u64) -> Self {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let mut basis = orthonormal(&mut r, 9);
        let mu = basis.pop().unwrap();
        let races = basis.split_off(4);
        let positions = IDENTITIES
            .iter()
            .map(|_| {
                let s: [f64; 4] = std::array::from_fn(|_| r.random_range(-0.9..0.9));
                let w: [f64; 4] = std::array::from_fn(|_| r.random::<f64>().powi(3));
                let total: f64 = w.iter().sum();
                (s, w.map(|v| v / total))
            })
            .collect();
        World {
            axes: basis,
            races,
            mu,
            positions,
        }
    }

    fn vector(&self, r: &mut ChaCha8Rng, s: [f64; 4], p: [f64; 4], noise: f64) -> Vec<f64> {
        let e = gaussian(r, DIM);
        (0..DIM)
            .map(|k| {
                let mut v = self.mu[k] + noise * e[k] / (DIM as f64).sqrt();
                for d in 0..4 {
                    v += s[d] * self.axes[d][k] + 0.8 * p[d] * self.races[d][k];
                }
                v
            })
            .collect()
    }

    fn vocabulary(&self, seed: u64, noise: f64) -> Vec<(String, Vec<f64>)> {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        let pole = |word: &str, d: usize, s: f64, rows: &mut Vec<(String, Vec<f64>)>, r: &mut ChaCha8Rng| {
            let mut pos = [0.0; 4];
            pos[d] = s;
            rows.push((word.to_owned(), self.vector(r, pos, [0.0; 4], noise)));
        };
        for (d, (_, left, right)) in MATCHED.iter().enumerate() {
            left.iter().for_each(|w| pole(w, d, -1.0, &mut rows, &mut r));
            right.iter().for_each(|w| pole(w, d, 1.0, &mut rows, &mut r));
        }
        PRIOR_GENDER.0.iter().for_each(|w| pole(w, 3, -1.0, &mut rows, &mut r));
        PRIOR_GENDER.1.iter().for_each(|w| pole(w, 3, 1.0, &mut rows, &mut r));
        for (d, (_, left, right)) in AUGMENTED.iter().enumerate() {
            left.iter().for_each(|w| pole(w, d, -0.8, &mut rows, &mut r));
            right.iter().for_each(|w| pole(w, d, 0.8, &mut rows, &mut r));
        }
        for (c, race) in RACES.iter().enumerate() {
            let mut p = [0.0; 4];
            p[c] = 1.0 / 0.8;
            rows.push((race.to_string(), self.vector(&mut r, [0.0; 4], p, noise)));
        }
        for (i, id) in IDENTITIES.iter().enumerate() {
            let (s, p) = self.positions[i];
            rows.push((id.to_string(), self.vector(&mut r, s, p, noise)));
        }
        rows
    }
}

fn vectors_text(rows: &[(String, Vec<f64>)], header: bool) -> String {
    let mut out = String::new();
    if header {
        writeln!(out, "{} {}", rows.len(), DIM).unwrap();
    }
    for (w, v) in rows {
        out.push_str(w);
        for x in v {
            write!(out, " {x:.6}").unwrap();
        }
        out.push('\n');
    }
    out
}

struct SurveyRow {
    identity: String,
    dimension: &'static str,
    unit_mean: f64,
}

fn survey_rows(world: &World, r: &mut ChaCha8Rng, noise: f64, dims: &[&'static str]) -> Vec<SurveyRow> {
    let mut rows = Vec::new();
    for (i, id) in IDENTITIES.iter().enumerate() {
        let (s, p) = world.positions[i];
        for &dim in dims {
            let truth = match BINARY.iter().position(|d| *d == dim) {
                Some(d) => (s[d] + 1.0) / 2.0,
                None => p[RACES.iter().position(|c| *c == dim).unwrap()],
            };
            let e: f64 = StandardNormal.sample(r);
            rows.push(SurveyRow {
                identity: id.replace('_', " "),
                dimension: dim,
                unit_mean: (truth + noise * e).clamp(0.0, 1.0),
            });
        }
    }
    rows
}

fn survey_csv(
    rows: &[SurveyRow],
    r: &mut ChaCha8Rng,
    (lo, hi): (f64, f64),
    with_dimension: bool,
    with_variance: bool,
    lexical: bool,
) -> String {
    let mut out = String::from("identity");
    if with_dimension {
        out.push_str(",dimension");
    }
    out.push_str(",mean");
    if with_variance {
        out.push_str(",sd,n");
    }
    if lexical {
        out.push_str(",log_frequency,synsets");
    }
    out.push('\n');
    for row in rows {
        write!(out, "{}", row.identity).unwrap();
        if with_dimension {
            write!(out, ",{}", row.dimension).unwrap();
        }
        write!(out, ",{:.4}", lo + row.unit_mean * (hi - lo)).unwrap();
        if with_variance {
            let sd = r.random_range(0.15..0.3) * (hi - lo);
            write!(out, ",{:.4},{}", sd, r.random_range(25..60)).unwrap();
        }
        if lexical {
            let i = IDENTITIES.iter().position(|w| w.replace('_', " ") == row.identity).unwrap();
            // deterministic per identity so every dimension agrees
            let mut lr = ChaCha8Rng::seed_from_u64(1000 + i as u64);
            write!(out, ",{:.3},{}", lr.random_range(8.0..16.0), lr.random_range(1..12)).unwrap();
        }
        out.push('\n');
    }
    out
}

fn labeling_csv(rows: &[SurveyRow], r: &mut ChaCha8Rng, questions: usize) -> String {
    let eval: Vec<f64> = IDENTITIES
        .iter()
        .map(|id| {
            let name = id.replace('_', " ");
            rows.iter()
                .find(|row| row.identity == name && row.dimension == "evaluation")
                .unwrap()
                .unit_mean
        })
        .collect();
    let m = eval.iter().sum::<f64>() / eval.len() as f64;
    let sd = (eval.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (eval.len() - 1) as f64).sqrt();
    let z: Vec<f64> = eval.iter().map(|v| (v - m) / sd).collect();

    let mut out = String::from("question_id,question_type,question_identity,answer_1,answer_2,answer_3,answer_4,selected\n");
    let name = |i: usize| IDENTITIES[i].replace('_', " ");
    let mut qid = 0;
    for qtype in ["IsA", "SeenWith"] {
        for _ in 0..questions {
            qid += 1;
            let picks = sample(r, IDENTITIES.len(), 5).into_vec();
            let (q, answers) = (picks[0], &picks[1..]);
            let weights: Vec<f64> = answers.iter().map(|&a| (-2.5 * (z[q] - z[a]).abs()).exp()).collect();
            let total: f64 = weights.iter().sum();
            let mut u = r.random::<f64>() * total;
            let mut chosen = answers[3];
            for (k, w) in weights.iter().enumerate() {
                if u < *w {
                    chosen = answers[k];
                    break;
                }
                u -= w;
            }
            // a few respondents decline to choose
            let selected = if r.random::<f64>() < 0.03 { "all are equally unlikely".to_owned() } else { name(chosen) };
            writeln!(
                out,
                "q{qid:04},{qtype},{},{},{},{},{},{}",
                name(q),
                name(answers[0]),
                name(answers[1]),
                name(answers[2]),
                name(answers[3]),
                selected
            )
            .unwrap();
        }
    }
    out
}

fn toml_list(words: &[&str]) -> String {
    let quoted: Vec<String> = words.iter().map(|w| format!("{w:?}")).collect();
    format!("[{}]", quoted.join(", "))
}

fn dimension_files(dir: &Path) {
    let mut affective = String::from(
        "# Survey-matched affective word sets: the terms placed at the ends of\n\
         # each semantic differential scale. The left pole is the low survey end.\n",
    );
    for (name, left, right) in &MATCHED[..3] {
        write!(
            affective,
            "\n[[dimension]]\nname = \"{name}\"\nwordset = \"survey-matched\"\nleft = {}\nright = {}\n",
            toml_list(left),
            toml_list(right)
        )
        .unwrap();
    }
    fs::write(dir.join("affective.toml"), affective).unwrap();

    let (name, left, right) = MATCHED[3];
    let gender = format!(
        "# Gender. The prior-work set is the he/him versus she/her baseline; the\n\
         # survey-matched set uses the scale labels. Female is the high end.\n\
         \n[[dimension]]\nname = \"gender\"\nwordset = \"prior-work\"\nleft = {}\nright = {}\npairs = [[\"he\", \"she\"], [\"him\", \"her\"]]\n\
         \n[[dimension]]\nname = \"{name}\"\nwordset = \"survey-matched\"\nleft = {}\nright = {}\n",
        toml_list(PRIOR_GENDER.0),
        toml_list(PRIOR_GENDER.1),
        toml_list(left),
        toml_list(right),
    );
    fs::write(dir.join("gender.toml"), gender).unwrap();

    let mut augmented = String::from(
        "# NON-CANONICAL. A best-effort reconstruction of thesaurus-extended\n\
         # affective word sets: the survey-matched terms plus near synonyms.\n\
         # Replace with your own lists for real analyses.\n",
    );
    for ((name, l0, r0), (_, l1, r1)) in MATCHED[..3].iter().zip(&AUGMENTED) {
        let left: Vec<&str> = l0.iter().chain(l1.iter()).copied().collect();
        let right: Vec<&str> = r0.iter().chain(r1.iter()).copied().collect();
        write!(
            augmented,
            "\n[[dimension]]\nname = \"{name}\"\nwordset = \"survey-augmented\"\nleft = {}\nright = {}\n",
            toml_list(&left),
            toml_list(&right)
        )
        .unwrap();
    }
    fs::write(dir.join("augmented.toml"), augmented).unwrap();

    let categories: Vec<String> = RACES
        .iter()
        .map(|c| format!("  {{ name = \"{c}\", words = [\"{c}\"] }},"))
        .collect();
    let race = format!(
        "# Race as a multiclass dimension. Pair-based measures contrast each\n\
         # category with the default (white), and the default with black;\n\
         # centroid and word-set measures use one-vs-rest.\n\
         \n[[dimension]]\nname = \"race\"\nwordset = \"prior-work\"\n\n[dimension.multiclass]\ndefault = \"white\"\ncontrast = \"black\"\ncategories = [\n{}\n]\n",
        categories.join("\n")
    );
    fs::write(dir.join("race.toml"), race).unwrap();
}

fn main() {
    let root = std::env::args().nth(1).unwrap_or_else(|| "fixtures".into());
    let root = Path::new(&root);
    for sub in ["embeddings", "dimensions", "surveys"] {
        fs::create_dir_all(root.join(sub)).unwrap();
    }
    let world = World::new(7);
    fs::write(root.join("embeddings/planted.vec"), vectors_text(&world.vocabulary(11, 0.02), true)).unwrap();
    fs::write(root.join("embeddings/planted-noisy.txt"), vectors_text(&world.vocabulary(12, 0.3), false)).unwrap();
    dimension_files(&root.join("dimensions"));

    let mut r = ChaCha8Rng::seed_from_u64(13);
    let all_dims: Vec<&'static str> = BINARY.iter().chain(RACES.iter()).copied().collect();
    let this_paper = survey_rows(&world, &mut r, 0.02, &all_dims);
    fs::write(root.join("surveys/this_paper.csv"), survey_csv(&this_paper, &mut r, (0.0, 1.0), true, true, true)).unwrap();
    let bolukbasi = survey_rows(&world, &mut r, 0.04, &["gender"]);
    fs::write(root.join("surveys/bolukbasi.csv"), survey_csv(&bolukbasi, &mut r, (0.0, 10.0), false, false, true)).unwrap();
    let traits = survey_rows(&world, &mut r, 0.04, &["evaluation", "potency"]);
    fs::write(
        root.join("surveys/personality_traits.csv"),
        survey_csv(&traits, &mut r, (1.0, 5.0), true, true, false),
    )
    .unwrap();
    let epa = survey_rows(&world, &mut r, 0.04, &["evaluation", "potency", "activity"]);
    fs::write(root.join("surveys/epa_dictionary.csv"), survey_csv(&epa, &mut r, (-4.3, 4.3), true, true, true)).unwrap();

    fs::write(root.join("labeling.csv"), labeling_csv(&this_paper, &mut r, 400)).unwrap();
}
