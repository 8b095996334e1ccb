use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use thickmix_capi::*;

fn last_error() -> String {
    let p = thm_last_error();
    assert!(!p.is_null(), "expected an error message");
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn block_round_trip() {
    unsafe {
        let mut b = ptr::null_mut();
        assert_eq!(thm_chacon_block(3, &mut b), ThmStatus::Ok);
        assert_eq!(thm_block_len(b), 40);
        let mut buf = vec![9u8; 40];
        assert_eq!(
            thm_block_letters(b, buf.as_mut_ptr(), 39),
            ThmStatus::BufferTooSmall
        );
        assert!(last_error().contains("need 40"));
        assert_eq!(thm_block_letters(b, buf.as_mut_ptr(), 40), ThmStatus::Ok);
        let text: String = buf.iter().map(|&x| char::from(b'0' + x)).collect();
        assert_eq!(text, "0010001010010001000101001010010001010010");
        assert!(thm_last_error().is_null());
        thm_block_free(b);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut b = ptr::null_mut();
        assert_eq!(thm_chacon_block(0, &mut b), ThmStatus::InvalidDepth);
        assert_eq!(thm_chacon_block(13, &mut b), ThmStatus::DepthExceedsCap);
        assert!(b.is_null());
        assert_eq!(thm_chacon_block(2, ptr::null_mut()), ThmStatus::NullPointer);
        assert_eq!(last_error(), "out is null");
        let mut out = 0i64;
        assert_eq!(thm_gap_element(3, &mut out), ThmStatus::Ok);
        assert_eq!(out, 39);
        assert_eq!(thm_block_length(2, &mut out), ThmStatus::Ok);
        assert_eq!(out, 13);
        // Null handles are tolerated by the accessors and destructors.
        assert_eq!(thm_block_len(ptr::null()), 0);
        assert!(!thm_zset_contains(ptr::null(), 0));
        thm_zset_free(ptr::null_mut());
        thm_report_free(ptr::null_mut());
    }
}

#[test]
fn return_set_through_the_abi() {
    unsafe {
        let b1 = [0u8, 0, 1, 0];
        let mut s = ptr::null_mut();
        let st = thm_return_set(b1.as_ptr(), 4, 0, b1.as_ptr(), 4, 0, 4, -9, 9, &mut s);
        assert_eq!(st, ThmStatus::Ok);
        let mut buf = [0i64; 16];
        assert_eq!(thm_zset_elements(s, buf.as_mut_ptr(), 16), ThmStatus::Ok);
        let n = thm_zset_len(s);
        assert_eq!(&buf[..n], &[-9, -8, -5, -4, 0, 4, 5, 8, 9]);
        let (mut lo, mut hi) = (0, 0);
        assert_eq!(thm_zset_certified_range(s, &mut lo, &mut hi), ThmStatus::Ok);
        assert_eq!((lo, hi), (-9, 9));
        thm_zset_free(s);

        let st = thm_return_set(b1.as_ptr(), 4, 0, b1.as_ptr(), 4, 0, 2, -100, 100, &mut s);
        assert_eq!(st, ThmStatus::UnreachableRange);
        let bad = [0u8, 2];
        let st = thm_return_set(bad.as_ptr(), 2, 0, b1.as_ptr(), 4, 0, 4, -1, 1, &mut s);
        assert_eq!(st, ThmStatus::InvalidArgument);
        let st = thm_return_set(b1.as_ptr(), 4, 0, b1.as_ptr(), 4, 0, 4, 5, -5, &mut s);
        assert_eq!(st, ThmStatus::InvalidArgument);
    }
}

#[test]
fn truncated_sum_and_h_sets() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(thm_truncated_h_sum(1, 3, -20, 20, &mut s), ThmStatus::Ok);
        assert!(thm_zset_contains(s, 17));
        assert!(!thm_zset_contains(s, 3));
        thm_zset_free(s);
        assert_eq!(
            thm_truncated_h_sum(3, 2, -1, 1, &mut s),
            ThmStatus::PreconditionViolated
        );
    }
}

#[test]
fn run_reports() {
    unsafe {
        let mut suite = ThmSuite::All;
        let name = CString::new("torus").unwrap();
        assert_eq!(
            thm_suite_from_name(name.as_ptr(), &mut suite),
            ThmStatus::Ok
        );
        assert_eq!(suite, ThmSuite::Torus);
        let bogus = CString::new("tori").unwrap();
        assert_eq!(
            thm_suite_from_name(bogus.as_ptr(), &mut suite),
            ThmStatus::InvalidArgument
        );

        let cfg = thm_config_default(ThmSuite::Torus);
        assert_eq!((cfg.depth, cfg.seed), (6, 42));
        let mut r = ptr::null_mut();
        assert_eq!(thm_run(&cfg, &mut r), ThmStatus::Ok);
        assert_eq!(thm_report_exit_code(r), 0);
        let (mut fail, mut finding) = (9, 9);
        assert_eq!(thm_report_counts(r, &mut fail, &mut finding), ThmStatus::Ok);
        assert_eq!((fail, finding), (0, 1));
        let json = CStr::from_ptr(thm_report_json(r)).to_str().unwrap();
        let v: serde_json::Value = serde_json::from_str(json).unwrap();
        assert_eq!(v["config"]["suite"], "torus");
        thm_report_free(r);

        let mut bad = cfg;
        bad.depth = 40;
        assert_eq!(thm_run(&bad, &mut r), ThmStatus::DepthExceedsCap);
        bad = cfg;
        bad.suite = 17;
        assert_eq!(thm_run(&bad, &mut r), ThmStatus::InvalidArgument);
        assert!(last_error().contains("17"));
    }
}

#[test]
fn header_is_current_and_declares_the_api() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/thickmix.h"))
            .unwrap();
    for name in [
        "thm_chacon_block",
        "thm_block_free",
        "thm_return_set",
        "thm_zset_elements",
        "thm_run",
        "thm_report_json",
        "thm_last_error",
        "THM_STATUS_DEPTH_EXCEEDS_CAP",
        "typedef struct ThmZSet ThmZSet",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

/// Compiles `tests/c/smoke.c` against the generated header and the static
/// library, then runs it.
#[test]
fn c_program_links_and_runs() {
    let exe = std::env::current_exe().unwrap();
    // target/<profile>/deps/capi-<hash>
    let profile_dir: PathBuf = exe.parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libthickmix_capi.a");
    if !lib.exists() {
        panic!("static library not built at {}", lib.display());
    }
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let out = tempfile::tempdir().unwrap();
    let bin = out.path().join("smoke");
    let manifest = env!("CARGO_MANIFEST_DIR");
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(format!("{manifest}/include"))
        .arg(format!("{manifest}/tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler runs");
    assert!(status.success(), "compiling smoke.c failed");
    let run = Command::new(&bin).output().unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(
        run.status.success(),
        "smoke failed: {}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(stdout.trim(), format!("ok {}", env!("CARGO_PKG_VERSION")));
}
