use std::process::exit;

// Dying quietly on a closed pipe (`alcself compile ... | head`) beats the
// default panic from a failed stdout write.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() {
    reset_sigpipe();
    exit(alcself::cli::run(std::env::args_os()))
}
