use std::path::Path;

use fibrefilm::config::{BranchSpec, FrameSpeed, GuessMode, IcKind, Length};
use fibrefilm::{commands, parse_config, parse_config_with, Command, RunConfig};

fn recipe(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("recipes").join(name)).unwrap()
}

#[test]
fn minimal_config_gets_defaults() {
    let cfg = parse_config("command = simulate\n").unwrap();
    let mut expected = RunConfig::default();
    expected.command = Some(Command::Simulate);
    assert_eq!(cfg, expected);
    assert_eq!(cfg.model.sigma, 0.01);
    assert_eq!(cfg.model.r0, 0.2);
    assert_eq!(cfg.model.a, 0.0);
    assert_eq!(cfg.nodes, 256);
    assert_eq!(cfg.length, Length::Period);
    assert_eq!(cfg.ic, IcKind::Minimizer);
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let cfg = parse_config("# header\n\nmodel.sigma = 0.02   # trailing\n").unwrap();
    assert_eq!(cfg.model.sigma, 0.02);
}

#[test]
fn small_exponent_with_stabilization_is_rejected() {
    let err = parse_config("model.A = 0.1\nmodel.m = 2\n").unwrap_err();
    assert_eq!(err.0.len(), 1);
    assert_eq!(err.0[0].line, 2);
    assert!(err.0[0].message.contains("m > 2"), "{}", err.0[0].message);
    assert!(parse_config("model.A = 0\nmodel.m = 2\n").is_ok());
}

#[test]
fn every_error_is_reported_with_its_line() {
    let text = "model.sigma = -1\nbogus.key = 3\ngrid.nodes = many\nmodel.r0 = 0.2\nmodel.r0 = 0.3\nnot a pair\n";
    let err = parse_config(text).unwrap_err();
    let lines: Vec<usize> = err.0.iter().map(|e| e.line).collect();
    assert_eq!(lines, vec![1, 2, 3, 5, 6], "{err}");
    let text = err.to_string();
    assert!(text.contains("5 configuration error(s)"));
    assert!(text.contains("bogus.key"));
}

#[test]
fn missing_files_are_caught_at_parse_time() {
    let err = parse_config("ic.kind = file\nic.file = /definitely/not/here.csv\n").unwrap_err();
    assert_eq!(err.0[0].line, 2);
}

#[test]
fn overrides_replace_file_values() {
    let text = "grid.nodes = 64\n";
    let cfg = parse_config_with(text, &["grid.nodes=128".into(), "model.gravity=true".into()], Path::new(".")).unwrap();
    assert_eq!(cfg.nodes, 128);
    assert!(cfg.model.has_gravity());
    let err = parse_config_with(text, &["grid.nodes=0".into()], Path::new(".")).unwrap_err();
    assert!(err.to_string().contains("grid.nodes=0"), "{err}");
    assert!(parse_config_with(text, &["nonsense".into()], Path::new(".")).is_err());
}

#[test]
fn command_mismatch_is_caught_before_solving() {
    let cfg = parse_config("command = period\n").unwrap();
    assert!(cfg.check_for(Command::Simulate).is_err());
    assert!(cfg.check_for(Command::Period).is_ok());
    let cfg = parse_config("command = travelwave\n").unwrap();
    assert!(cfg.check_for(Command::Travelwave).is_err(), "gravity is required");
}

#[test]
fn fig3_recipe_parses_to_the_reference_parameters() {
    let cfg = parse_config(&recipe("fig3.cfg")).unwrap();
    assert_eq!(cfg.command, Some(Command::Simulate));
    assert_eq!((cfg.model.r0, cfg.model.sigma, cfg.model.a), (0.2, 0.01, 0.0));
    assert_eq!(cfg.branch, BranchSpec::Explicit { lambda: -0.5, c0: 0.5 });
    assert_eq!(cfg.length, Length::Period);
    let l = commands::grid(&cfg).unwrap().length();
    assert_eq!(l, commands::period_run(&cfg).unwrap().tau);
    assert!((l - 10.805).abs() < 1e-3, "{l}");
}

#[test]
fn wave_recipes_select_the_evolved_guess() {
    for name in ["fig6.cfg", "travelwave.cfg"] {
        let cfg = parse_config(&recipe(name)).unwrap();
        assert_eq!(cfg.tw.guess, GuessMode::Evolved);
        assert_eq!((cfg.tw.length, cfg.tw.mass), (Some(9.0), Some(57.2)));
    }
    let cfg = parse_config(&recipe("fig6.cfg")).unwrap();
    assert_eq!(cfg.frame_speed, FrameSpeed::Wave);
    assert_eq!(cfg.ic, IcKind::PerturbedWave { frequency: 1 });
}

#[test]
fn every_shipped_recipe_is_valid_for_its_command() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("recipes");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "cfg") {
            let cfg = parse_config(&std::fs::read_to_string(&path).unwrap()).unwrap();
            cfg.check_for(cfg.command.expect("recipes name their command")).unwrap();
            count += 1;
        }
    }
    assert!(count >= 6);
}
