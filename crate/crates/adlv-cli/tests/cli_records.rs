use std::process::Command as Proc;

use adlv_cli::record::parse_omega_label;
use adlv_cli::{run, Command, DatumConfig, Options, ResultRecord, Status};

fn preset(name: &str, rank: Option<usize>) -> Options {
    Options {
        preset: Some(name.into()),
        rank,
        ..Options::default()
    }
}

#[test]
fn config_documents_parse() {
    let cfg = DatumConfig::parse(
        "type = \"B\"\nrank = 2\nsigma = [1, 0, 2]\nmu = [1, 0]\nremoved_node = 2\n",
    )
    .unwrap();
    let cd = cfg.coxeter_datum().unwrap();
    assert_eq!(cd.enumerate_eo().unwrap().len(), 4);
    assert!(DatumConfig::parse("type = \"A\"\ncolour = 3\n").is_err());
    assert!(DatumConfig::parse("rank = \"two\"").is_err());
    let bad = DatumConfig::parse("type = \"E\"\nrank = 6\n").unwrap();
    assert!(bad.root_datum().is_err());
    let not_stable = DatumConfig::parse("type = \"A\"\nrank = 2\nsigma = [1, 2, 0]\n").unwrap();
    assert!(not_stable.coxeter_datum().is_err());
}

#[test]
fn presets_expand_to_fixed_data() {
    let c = DatumConfig {
        preset: Some("example-3.1".into()),
        ..DatumConfig::default()
    }
    .expand()
    .unwrap();
    assert_eq!(c.type_letter.as_deref(), Some("A"));
    assert_eq!(c.rank, Some(8));
    assert_eq!(c.sigma, Some(vec![0, 8, 7, 6, 5, 4, 3, 2, 1]));
    assert_eq!(c.mu, Some(vec![1, 0, 0, 0, 0, 0, 0, 0]));
    assert_eq!(c.removed_node, Some(0));
    let c = DatumConfig {
        preset: Some("example-3.2".into()),
        rank: Some(3),
        ..DatumConfig::default()
    }
    .expand()
    .unwrap();
    assert_eq!(c.sigma, Some(vec![1, 0, 2, 3]));
    assert_eq!(c.removed_node, Some(3));
    let c = DatumConfig {
        preset: Some("example-1.3".into()),
        ..DatumConfig::default()
    };
    let cd = c.coxeter_datum().unwrap();
    assert_eq!(cd.tau_sigma().perm(), &[1, 0, 3, 2]);
    let clash = DatumConfig {
        preset: Some("example-3.1".into()),
        mu: Some(vec![0]),
        ..DatumConfig::default()
    };
    assert!(clash.expand().is_err());
}

#[test]
fn every_command_emits_round_tripping_records() {
    let mut a2 = preset("example-3.1", Some(2));
    a2.radius = Some(3);
    let cases: Vec<(Command, Options)> = vec![
        (Command::Adm, a2.clone()),
        (Command::Eo, preset("example-3.2", Some(3))),
        (
            Command::SigmaW,
            Options {
                word: Some("0".into()),
                ..preset("example-1.3", None)
            },
        ),
        (
            Command::Gate,
            Options {
                word: Some("0,1,2".into()),
                parabolic: Some("1".into()),
                ..a2.clone()
            },
        ),
        (
            Command::Cone,
            Options {
                direction: Some("1,2".into()),
                ..a2.clone()
            },
        ),
        (
            Command::DrEnum,
            Options {
                walls: Some("0:1,2:-1".into()),
                ..preset("example-3.1", Some(2))
            },
        ),
        (Command::Rational, preset("example-1.3", None)),
        (Command::Straight, a2.clone()),
        (
            Command::Separator,
            Options {
                eo: Some(0),
                eo2: Some(1),
                ..preset("example-1.3", None)
            },
        ),
        (Command::BtCheck, Options { radius: Some(3), ..preset("example-1.3", None) }),
        (Command::DlCheck, Options { n: Some(2), field: Some(vec![3, 2]), ..Options::default() }),
        (Command::Moore, Options { n: Some(2), field: Some(vec![2, 2]), ..Options::default() }),
    ];
    for (cmd, opts) in cases {
        let recs = run(cmd, &opts).unwrap();
        assert!(!recs.is_empty(), "{cmd:?}");
        for r in &recs {
            assert_eq!(r.command, cmd.name());
            assert_ne!(r.status, Status::Error);
            assert_ne!(r.status, Status::Fail, "{cmd:?}: {}", r.payload);
            let line = r.to_line();
            assert!(!line.contains('\n'));
            assert_eq!(ResultRecord::from_line(&line).unwrap(), *r);
        }
        assert_eq!(run(cmd, &opts).unwrap(), recs);
    }
}

#[test]
fn eo_records_match_golden_data() {
    let recs = run(Command::Eo, &preset("example-3.1", None)).unwrap();
    assert_eq!(recs.len(), 5);
    for r in &recs {
        assert_eq!(parse_omega_label(r.payload["omega"].as_str().unwrap()), Some(1));
    }
    let words: Vec<Vec<u64>> = recs
        .iter()
        .map(|r| r.payload["word"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect())
        .collect();
    assert!(words.contains(&vec![0, 8, 7, 6]));
    assert_eq!(run(Command::Eo, &preset("example-3.2", None)).unwrap().len(), 8);
    let dl = run(
        Command::DlCheck,
        &Options {
            n: Some(3),
            field: Some(vec![2, 3]),
            ..Options::default()
        },
    )
    .unwrap();
    assert_eq!(dl.len(), 1);
    assert_eq!(dl[0].status, Status::Pass);
    assert_eq!(dl[0].payload["points"], 24);
}

fn adlv(args: &[&str]) -> (i32, Vec<ResultRecord>) {
    let out = Proc::new(env!("CARGO_BIN_EXE_adlv")).args(args).output().unwrap();
    let recs = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| ResultRecord::from_line(l).unwrap())
        .collect();
    (out.status.code().unwrap(), recs)
}

#[test]
fn errors_produce_one_record_and_nonzero_exit() {
    for args in [
        vec!["eo", "--preset", "example-9.9"],
        vec!["eo", "--unknown-flag"],
        vec!["frobnicate"],
        vec!["sigma-w", "--preset", "example-3.1"],
        vec!["separator", "--preset", "example-1.3", "--eo", "0", "--eo2", "0"],
        vec!["dl-check", "--n", "7", "--field", "2", "4"],
        vec!["gate", "--preset", "example-3.1", "--rank", "2", "--parabolic", "0,1,2"],
        vec!["eo", "--config", "/nonexistent/datum.toml"],
    ] {
        let (code, recs) = adlv(&args);
        assert_ne!(code, 0, "{args:?}");
        assert_eq!(recs.len(), 1, "{args:?}");
        assert_eq!(recs[0].status, Status::Error);
        assert!(recs[0].payload["error"].is_string());
    }
    let (code, recs) = adlv(&["eo", "--preset", "example-3.1", "--rank", "4"]);
    assert_eq!(code, 0);
    assert_eq!(recs.len(), 3);
}

#[test]
fn config_file_and_flags_combine() {
    let dir = std::env::temp_dir().join(format!("adlv-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("datum.toml");
    std::fs::write(&path, "preset = \"example-3.2\"\n").unwrap();
    let p = path.to_str().unwrap();
    let (code, recs) = adlv(&["eo", "--config", p, "--rank", "2"]);
    assert_eq!(code, 0);
    assert_eq!(recs.len(), 4);
    assert_eq!(recs[0].input["datum"]["type"], "B");
    std::fs::remove_dir_all(&dir).unwrap();
}
