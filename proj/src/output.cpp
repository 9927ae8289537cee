#include "tcgate/output.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/core.h>
#include "json.hpp"
#include <openssl/sha.h>

#include "tcgate/errors.hpp"

namespace tcg {

namespace {

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string number(double v) {
    if (std::isnan(v)) return "nan";
    return fmt::format("{:.12g}", v);
}

}  // namespace

std::string csv_text(const ScanResult& result) {
    result.validate();
    const bool flagged = !result.flags.empty();
    std::ostringstream os;
    std::vector<std::string> head;
    for (const auto& a : result.axes) head.push_back(a.name);
    for (const auto& c : result.columns) head.push_back(c.name);
    if (flagged) head.emplace_back("flag");
    for (std::size_t i = 0; i < head.size(); ++i) os << (i ? "," : "") << quote(head[i]);
    os << "\r\n";

    const std::size_t n = result.cells();
    std::vector<std::size_t> stride(result.axes.size(), 1);
    for (std::size_t k = result.axes.size(); k-- > 1;) stride[k - 1] = stride[k] * result.axes[k].values.size();
    for (std::size_t cell = 0; cell < n; ++cell) {
        bool first = true;
        auto put = [&](const std::string& s) {
            os << (first ? "" : ",") << s;
            first = false;
        };
        for (std::size_t k = 0; k < result.axes.size(); ++k) {
            const auto& vals = result.axes[k].values;
            put(number(vals[(cell / stride[k]) % vals.size()]));
        }
        for (const auto& c : result.columns) put(number(c.values[cell]));
        if (flagged) put(quote(result.flags[cell]));
        os << "\r\n";
    }
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(fmt::format("cannot write '{}'", path));
    out << text;
    if (!out) throw Error(fmt::format("write to '{}' failed", path));
}

void emit_csv(const ScanResult& result, const std::string& path) { write_text(path, csv_text(result)); }

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    auto end_field = [&] {
        row.push_back(field);
        field.clear();
        any = true;
    };
    auto end_row = [&] {
        if (!any && field.empty()) return;
        end_field();
        if (t.header.empty())
            t.header = row;
        else
            t.rows.push_back(row);
        row.clear();
        any = false;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n') {
            end_row();
        } else if (c != '\r') {
            field += c;
        }
    }
    end_row();
    return t;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), digest);
    std::string hex;
    for (unsigned char b : digest) hex += fmt::format("{:02x}", b);
    return hex;
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["subcommand"] = subcommand;
    j["config_sha256"] = config_hash;
    j["tool_version"] = tool_version;
    j["started_utc"] = started_utc;
    j["wall_seconds"] = wall_seconds;
    j["threads"] = threads;
    j["seedless"] = seedless;
    j["outputs"] = outputs;
    nlohmann::ordered_json scans = nlohmann::ordered_json::object();
    for (const auto& [name, meta] : scan_metadata) {
        nlohmann::ordered_json m = nlohmann::ordered_json::object();
        for (const auto& [k, v] : meta) m[k] = v;
        scans[name] = m;
    }
    j["scans"] = scans;
    j["warnings"] = warnings;
    return j.dump(2) + "\n";
}

}  // namespace tcg
