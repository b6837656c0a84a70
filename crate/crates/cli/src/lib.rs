//! Command-line front end: scene-file ingestion, command dispatch, bundled
//! fixture library, and machine-readable verification reports.

pub mod fixtures;
pub mod run;
pub mod scene;

use scene::{Scene, SceneError};

/// Resolves a scene argument: a path on disk wins; otherwise the name is
/// looked up in the bundled fixture library.
pub fn resolve_scene(arg: &str) -> Result<Scene, SceneError> {
    if std::path::Path::new(arg).is_file() {
        let content = std::fs::read_to_string(arg).map_err(|source| SceneError::Io {
            path: arg.to_string(),
            source,
        })?;
        return scene::load_scene(arg, &content);
    }
    match fixtures::bundled(arg) {
        Some(content) => scene::load_scene(arg, content),
        None => Err(SceneError::Io {
            path: arg.to_string(),
            source: std::io::Error::new(
                std::io::ErrorKind::NotFound,
                "no such file and no bundled fixture with this name",
            ),
        }),
    }
}
