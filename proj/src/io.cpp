#include "lma/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lma {

using nlohmann::json;

MotionFormat format_from_path(const std::string& path) {
    auto ext = std::filesystem::path(path).extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == ".jsonl") return MotionFormat::Jsonl;
    if (ext == ".csv") return MotionFormat::Csv;
    throw ParseError("unrecognized motion file extension '" + ext + "' for " + path);
}

namespace {

std::string fmt_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& what) {
    throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

// Map the file's joint order onto the skeleton's joint order.
std::vector<int> joint_permutation(const std::string& path,
                                   const std::vector<std::string>& file_joints,
                                   const Skeleton& skeleton) {
    if (file_joints.size() != skeleton.size())
        throw ParseError(path + ": file declares " + std::to_string(file_joints.size()) +
                         " joints, skeleton expects " + std::to_string(skeleton.size()));
    std::vector<int> perm(skeleton.size(), -1);
    for (std::size_t k = 0; k < skeleton.size(); ++k) {
        auto it = std::find(file_joints.begin(), file_joints.end(), skeleton.joints[k]);
        if (it == file_joints.end())
            throw ParseError(path + ": missing joint '" + skeleton.joints[k] + "'");
        perm[k] = static_cast<int>(it - file_joints.begin());
    }
    return perm;
}

MotionSequence load_jsonl(const std::string& path, const Skeleton& skeleton) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);

    MotionSequence seq;
    seq.skeleton = skeleton;
    seq.id = std::filesystem::path(path).stem().string();

    std::string line;
    std::size_t lineno = 0;
    std::vector<int> perm;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            fail(path, lineno, std::string("bad JSON: ") + e.what());
        }
        if (lineno == 1) {
            if (!rec.contains("fps") || !rec.contains("joints"))
                fail(path, lineno, "header must contain 'fps' and 'joints'");
            seq.fps = rec.at("fps").get<double>();
            if (!(seq.fps > 0.0)) fail(path, lineno, "fps must be > 0");
            auto joints = rec.at("joints").get<std::vector<std::string>>();
            perm = joint_permutation(path, joints, skeleton);
            if (rec.contains("label") && !rec["label"].is_null())
                seq.label = rec["label"].get<std::string>();
            if (rec.contains("performer") && !rec["performer"].is_null())
                seq.performer_id = rec["performer"].get<std::string>();
            continue;
        }
        if (!rec.contains("pos")) fail(path, lineno, "frame record missing 'pos'");
        const auto& pos = rec.at("pos");
        if (pos.size() != skeleton.size())
            fail(path, lineno, "frame " + std::to_string(seq.frames.size()) + " has " +
                                   std::to_string(pos.size()) + " positions, expected " +
                                   std::to_string(skeleton.size()));
        Frame frame(skeleton.size());
        for (std::size_t k = 0; k < skeleton.size(); ++k) {
            const auto& p = pos[perm[k]];
            if (!p.is_array() || p.size() != 3)
                fail(path, lineno, "position of '" + skeleton.joints[k] + "' is not [x,y,z]");
            frame[k] = Vec3(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
            if (!frame[k].finite())
                fail(path, lineno, "non-finite coordinate at frame " +
                                       std::to_string(seq.frames.size()) + ", joint '" +
                                       skeleton.joints[k] + "'");
        }
        seq.frames.push_back(std::move(frame));
    }
    if (lineno == 0) throw ParseError(path + ": empty file");
    if (seq.frames.size() < 2)
        throw ParseError(path + ": needs at least 2 frames, got " +
                         std::to_string(seq.frames.size()));
    seq.validate();
    return seq;
}

MotionSequence load_csv(const std::string& path, const Skeleton& skeleton) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);

    MotionSequence seq;
    seq.skeleton = skeleton;
    seq.id = std::filesystem::path(path).stem().string();
    seq.fps = 0.0;

    std::string line;
    std::size_t lineno = 0;
    std::vector<int> col_of_joint;  // column block index per skeleton joint
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            // metadata comment: "# fps=25 label=angry performer=p1"
            std::istringstream ss(line.substr(1));
            std::string tok;
            while (ss >> tok) {
                auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                auto key = tok.substr(0, eq);
                auto val = tok.substr(eq + 1);
                if (key == "fps") seq.fps = std::stod(val);
                else if (key == "label") seq.label = val;
                else if (key == "performer") seq.performer_id = val;
            }
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);

        if (!header_seen) {
            header_seen = true;
            if (cells.empty() || cells[0] != "frame")
                fail(path, lineno, "first column must be 'frame'");
            if ((cells.size() - 1) % 3 != 0)
                fail(path, lineno, "joint columns must come in _x/_y/_z triples");
            std::vector<std::string> file_joints;
            for (std::size_t c = 1; c + 2 < cells.size() + 1; c += 3) {
                const auto& cx = cells[c];
                if (cx.size() < 3 || cx.substr(cx.size() - 2) != "_x")
                    fail(path, lineno, "expected '<joint>_x' column, got '" + cx + "'");
                file_joints.push_back(cx.substr(0, cx.size() - 2));
            }
            col_of_joint = joint_permutation(path, file_joints, skeleton);
            continue;
        }
        if (cells.size() != 1 + 3 * skeleton.size())
            fail(path, lineno, "expected " + std::to_string(1 + 3 * skeleton.size()) +
                                   " cells, got " + std::to_string(cells.size()));
        Frame frame(skeleton.size());
        for (std::size_t k = 0; k < skeleton.size(); ++k) {
            double xyz[3];
            for (int d = 0; d < 3; ++d) {
                const auto& s = cells[1 + 3 * col_of_joint[k] + d];
                auto res = std::from_chars(s.data(), s.data() + s.size(), xyz[d]);
                if (res.ec != std::errc{})
                    fail(path, lineno, "bad number '" + s + "'");
            }
            frame[k] = Vec3(xyz[0], xyz[1], xyz[2]);
            if (!frame[k].finite())
                fail(path, lineno, "non-finite coordinate at frame " +
                                       std::to_string(seq.frames.size()) + ", joint '" +
                                       skeleton.joints[k] + "'");
        }
        seq.frames.push_back(std::move(frame));
    }
    if (!header_seen) throw ParseError(path + ": no header row");
    if (seq.fps <= 0.0)
        throw ParseError(path + ": fps not given (add a '# fps=...' metadata line)");
    if (seq.frames.size() < 2)
        throw ParseError(path + ": needs at least 2 frames, got " +
                         std::to_string(seq.frames.size()));
    seq.validate();
    return seq;
}

}  // namespace

MotionSequence load_sequence(const std::string& path, MotionFormat format,
                             const Skeleton& skeleton) {
    return format == MotionFormat::Jsonl ? load_jsonl(path, skeleton)
                                         : load_csv(path, skeleton);
}

void save_sequence_jsonl(const MotionSequence& seq, const std::string& path) {
    std::ostringstream out;
    json header = {{"fps", seq.fps}, {"joints", seq.skeleton.joints}};
    if (seq.label) header["label"] = *seq.label;
    if (seq.performer_id) header["performer"] = *seq.performer_id;
    out << header.dump() << "\n";
    for (std::size_t t = 0; t < seq.frames.size(); ++t) {
        json pos = json::array();
        for (const auto& p : seq.frames[t]) pos.push_back({p.x, p.y, p.z});
        json rec = {{"t", t}, {"pos", pos}};
        out << rec.dump() << "\n";
    }
    atomic_write(path, out.str());
}

void save_sequence_csv(const MotionSequence& seq, const std::string& path) {
    std::ostringstream out;
    out << "# fps=" << fmt_double(seq.fps);
    if (seq.label) out << " label=" << *seq.label;
    if (seq.performer_id) out << " performer=" << *seq.performer_id;
    out << "\nframe";
    for (const auto& j : seq.skeleton.joints)
        out << "," << j << "_x," << j << "_y," << j << "_z";
    out << "\n";
    for (std::size_t t = 0; t < seq.frames.size(); ++t) {
        out << t;
        for (const auto& p : seq.frames[t])
            out << "," << fmt_double(p.x) << "," << fmt_double(p.y) << "," << fmt_double(p.z);
        out << "\n";
    }
    atomic_write(path, out.str());
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace lma
