//! The console sessions in the guide's command-line chapter must match the
//! binary's output exactly.

const CHAPTER: &str = include_str!("../../../book/src/cli.md");

/// `(command line, expected output)` for every `console` block.
fn sessions() -> Vec<(String, String)> {
    let mut out = Vec::new();
    let mut lines = CHAPTER.lines();
    while let Some(line) = lines.next() {
        if line.trim() != "```console" {
            continue;
        }
        let mut block: Vec<&str> = Vec::new();
        for l in lines.by_ref() {
            if l.trim() == "```" {
                break;
            }
            block.push(l);
        }
        let command = block[0].strip_prefix("$ ").expect("session starts with a prompt").to_string();
        let expected = block[1..].iter().map(|l| format!("{l}\n")).collect();
        out.push((command, expected));
    }
    out
}

#[test]
fn console_sessions_match() {
    let sessions = sessions();
    assert!(sessions.len() >= 6);
    for (command, expected) in sessions {
        let argv = shlex::split(&command).expect("well-formed command line");
        assert_eq!(argv[0], "thompson-renorm");
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = thompson_renorm_cli::run(argv, &mut out, &mut err);
        assert_eq!(code, 0, "{command}: {}", String::from_utf8_lossy(&err));
        assert_eq!(String::from_utf8(out).unwrap(), expected, "{command}");
    }
}
