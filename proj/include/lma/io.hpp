#pragma once

#include <stdexcept>
#include <string>

#include "lma/motion.hpp"

namespace lma {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class MotionFormat { Jsonl, Csv };

/// Picks the format from the file extension (.jsonl / .csv).
MotionFormat format_from_path(const std::string& path);

/// Loads and validates a motion sequence. The skeleton argument fixes joint
/// order and weights; the file's joint set must match it. Throws ParseError
/// with file/line context on malformed input.
MotionSequence load_sequence(const std::string& path, MotionFormat format,
                             const Skeleton& skeleton);

void save_sequence_jsonl(const MotionSequence& seq, const std::string& path);
void save_sequence_csv(const MotionSequence& seq, const std::string& path);

/// Writes to `path + ".tmp"` then renames, so readers never see a torn file.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace lma
