// Scan persistence and report emission: JSONL cache (append-friendly,
// resumable, config-pinned), CSV tables, JSON summaries, DOT/JSON trees.

#pragma once

#include "syracuse/attractors.hpp"
#include "syracuse/integer_dynamics.hpp"
#include "syracuse/rigor.hpp"
#include "syracuse/stats.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>

namespace syracuse::io {

using json = nlohmann::json;

class config_mismatch : public kernel_domain_error {
public:
    explicit config_mismatch(const std::string& what) : kernel_domain_error(what) {}
};

// FNV-1a over the canonical dump; stable across runs and platforms.
inline std::string config_hash(const json& config) {
    std::string dump = config.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline json policy_to_json(const PrecisionPolicy& p) {
    return json{{"start_bits", p.start_bits},
                {"max_bits", p.max_bits},
                {"escalation", p.escalation},
                {"agreement_digits", p.agreement_digits}};
}

inline json record_to_json(const attractors::ScanRecord& r) {
    json j{{"n", r.n},
           {"label", r.outcome.result_label()},
           {"iterations", r.outcome.iterations},
           {"bits", r.outcome.bits_used},
           {"proche", r.proche}};
    if (r.first_divergence_step >= 0)
        j["first_divergence_step"] = r.first_divergence_step;
    else
        j["first_divergence_step"] = nullptr;
    if (!r.outcome.note.empty()) j["note"] = r.outcome.note;
    return j;
}

inline attractors::ScanRecord record_from_json(const json& j) {
    attractors::ScanRecord r;
    r.n = j.at("n").get<long>();
    std::string lbl = j.value("label", "UNRESOLVED");
    r.outcome.kind = attractors::OutcomeKind::unresolved;
    using attractors::AttractorId;
    for (auto id : {AttractorId::ZERO, AttractorId::A1, AttractorId::A2, AttractorId::NU1,
                    AttractorId::B1, AttractorId::B2, AttractorId::B3, AttractorId::B4}) {
        if (lbl == attractors::label(id)) {
            r.outcome.kind = attractors::OutcomeKind::attracted;
            r.outcome.which = id;
        }
    }
    if (lbl == "CAP_EXCEEDED") r.outcome.kind = attractors::OutcomeKind::cap_exceeded;
    if (lbl == "MAGNITUDE_ESCAPE") r.outcome.kind = attractors::OutcomeKind::magnitude_escape;
    r.outcome.iterations = j.value("iterations", 0L);
    r.outcome.bits_used = j.value("bits", 0L);
    r.proche = j.value("proche", true);
    if (j.contains("first_divergence_step") && !j["first_divergence_step"].is_null())
        r.first_divergence_step = j["first_divergence_step"].get<long>();
    return r;
}

// JSONL scan cache. First line is a header pinning format version and the
// config hash; every record is one line, appended atomically and flushed.
// Reopening with a different config refuses unless force is set (which
// starts the file over).
class ScanCache {
public:
    static constexpr int kVersion = 1;

    ScanCache(std::string path, json config, bool force = false)
        : path_(std::move(path)), config_(std::move(config)), hash_(config_hash(config_)) {
        namespace fs = std::filesystem;
        if (fs::exists(path_) && fs::file_size(path_) > 0 && !force) {
            load_existing();
        } else {
            start_fresh();
        }
        out_.open(path_, std::ios::app | std::ios::binary);
        if (!out_) throw kernel_domain_error("scan cache: cannot open " + path_ + " for append");
    }

    const std::set<long>& present() const { return present_; }

    void append(const attractors::ScanRecord& rec) {
        std::string line = record_to_json(rec).dump();
        line.push_back('\n');
        std::lock_guard<std::mutex> lock(mu_);
        out_.write(line.data(), static_cast<std::streamsize>(line.size()));
        out_.flush();
        present_.insert(rec.n);
    }

    const std::vector<json>& records() const { return records_; }

private:
    void start_fresh() {
        std::ofstream fresh(path_, std::ios::trunc | std::ios::binary);
        if (!fresh) throw kernel_domain_error("scan cache: cannot create " + path_);
        json header{{"format", "syracuse-scan"},
                    {"version", kVersion},
                    {"config_hash", hash_},
                    {"config", config_}};
        fresh << header.dump() << "\n";
    }

    void load_existing() {
        std::ifstream in(path_, std::ios::binary);
        if (!in) throw kernel_domain_error("scan cache: cannot read " + path_);
        std::string line;
        std::uint64_t good_end = 0;
        bool have_header = false;
        while (true) {
            std::uint64_t line_start = good_end;
            if (!std::getline(in, line)) break;
            bool complete = !in.eof();  // getline at EOF without newline -> partial line
            json j;
            bool parsed = true;
            try {
                j = json::parse(line);
            } catch (const json::exception&) {
                parsed = false;
            }
            if (!parsed || !complete) {
                std::cerr << "scan cache: truncating corrupt trailing data in " << path_
                          << " at byte " << line_start << "\n";
                std::filesystem::resize_file(path_, line_start);
                break;
            }
            good_end = line_start + line.size() + 1;
            if (!have_header) {
                if (!j.contains("format") || j["format"] != "syracuse-scan")
                    throw kernel_domain_error("scan cache: " + path_ + " is not a scan file");
                if (j.value("config_hash", "") != hash_)
                    throw config_mismatch("scan cache: config hash mismatch in " + path_ +
                                          " (use force to start over)");
                have_header = true;
                continue;
            }
            if (j.contains("n")) {
                present_.insert(j["n"].get<long>());
                records_.push_back(j);
            }
        }
        if (!have_header) start_fresh();
    }

    std::string path_;
    json config_;
    std::string hash_;
    std::ofstream out_;
    std::set<long> present_;
    std::vector<json> records_;
    std::mutex mu_;
};

// -- summaries and tables -----------------------------------------------------------

inline json scan_summary(const std::vector<attractors::ScanRecord>& records, const json& config) {
    auto by_label = attractors::summarize(records);
    json labels = json::object();
    for (const auto& [k, v] : by_label) labels[k] = v;
    json not_proche = json::array();
    std::vector<long> np;
    for (const auto& r : records)
        if (!r.proche) np.push_back(r.n);
    std::sort(np.begin(), np.end());
    for (long n : np) not_proche.push_back(n);
    return json{{"config", config},
                {"count", records.size()},
                {"by_label", labels},
                {"not_proche", not_proche}};
}

inline std::string tree_to_json(const dynamics::InverseTree& tree) {
    json nodes = json::array();
    for (const auto& n : tree.nodes) {
        json j{{"node", n.value}, {"depth", n.depth}};
        if (n.parent >= 0)
            j["parent"] = tree.nodes[static_cast<std::size_t>(n.parent)].value;
        else
            j["parent"] = nullptr;
        nodes.push_back(j);
    }
    return json{{"format", "syracuse-tree"}, {"depth", tree.depth}, {"nodes", nodes}}.dump(2);
}

inline std::string tree_to_dot(const dynamics::InverseTree& tree) {
    std::ostringstream os;
    os << "digraph inverse_tree {\n  rankdir=BT;\n";
    for (const auto& n : tree.nodes) {
        os << "  \"" << n.value << "\";\n";
        if (n.parent >= 0)
            os << "  \"" << n.value << "\" -> \""
               << tree.nodes[static_cast<std::size_t>(n.parent)].value << "\";\n";
    }
    os << "}\n";
    return os.str();
}

// CSV with a leading config comment so every table pins its provenance.
inline void write_csv_header(std::ostream& os, const json& config, const std::string& columns) {
    os << "# config " << config.dump() << "\n" << columns << "\n";
}

inline void write_critical_csv(std::ostream& os, const std::vector<critical::CriticalPoint>& rows,
                               const json& config, int digits) {
    write_csv_header(os, config, "n,c_n,radius_exponent,bits");
    for (const auto& cp : rows) {
        double rad = cp.enclosure.rad().to_double();
        long exponent = rad > 0 ? static_cast<long>(std::floor(std::log2(rad))) : -100000;
        os << cp.n << "," << cp.enclosure.mid().str(digits) << "," << exponent << "," << cp.bits
           << "\n";
    }
}

inline void write_flight_csv(std::ostream& os, std::uint64_t lo, std::uint64_t hi,
                             const json& config) {
    write_csv_header(os, config, "n,flight_time,mean_speed");
    for (std::uint64_t n = lo; n < hi; ++n) {
        auto fl = dynamics::flight_time(mpz_class(static_cast<unsigned long>(n)));
        double speed = fl.time > 0 && n > 1
                           ? std::exp(-std::log(static_cast<double>(n)) / static_cast<double>(fl.time))
                           : 1.0;
        os << n << "," << fl.time << "," << speed << "\n";
    }
}

inline void write_growth_csv(std::ostream& os, const stats::GrowthReport& rep, const json& config) {
    write_csv_header(os, config, "x,n,dstar,growth,min_abs,lhs,rhs,holds,bits");
    for (const auto& r : rep.rows)
        os << r.x0 << "," << r.n << "," << r.dstar << "," << r.growth << "," << r.min_abs << ","
           << r.lhs << "," << r.rhs << "," << (r.holds ? 1 : 0) << "," << r.bits << "\n";
}

inline json certificate_to_json(const rigor::Certificate& c) {
    json params = json::object();
    for (const auto& [k, v] : c.params) params[k] = v;
    json j{{"claim", c.claim},
           {"params", params},
           {"verdict", rigor::verdict_name(c.verdict)},
           {"subdivisions", c.subdivisions},
           {"bits", c.bits}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    return j;
}

}  // namespace syracuse::io
