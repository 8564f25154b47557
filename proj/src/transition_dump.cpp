#include "accesswalk/text.hpp"
#include "accesswalk/walk.hpp"

#include <zlib.h>

#include <array>
#include <sstream>
#include <stdexcept>

namespace accesswalk {

namespace {

gzFile as_gz(void* p) { return static_cast<gzFile>(p); }

bool ends_with(std::string_view s, std::string_view suffix)
{
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

TransitionDumpWriter::TransitionDumpWriter(const std::string& path, const StreetNetwork& net,
                                           std::optional<std::string> header)
    : net_(&net)
{
    // "wT" writes through zlib without compression.
    file_ = gzopen(path.c_str(), ends_with(path, ".gz") ? "wb6" : "wT");
    if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
    if (header) put("# " + *header + "\n");
    put("source,h,target,probability\n");
}

TransitionDumpWriter::~TransitionDumpWriter()
{
    if (file_) gzclose(as_gz(file_));
}

void TransitionDumpWriter::put(const std::string& text)
{
    if (!file_) throw std::logic_error("transition dump already closed");
    if (text.empty()) return;
    if (gzwrite(as_gz(file_), text.data(), static_cast<unsigned>(text.size())) !=
        static_cast<int>(text.size()))
        throw std::runtime_error("transition dump: write failed");
}

void TransitionDumpWriter::write(const TransitionTable& table)
{
    std::string block;
    const std::string src = csv_field(net_->label(table.source)) + ",";
    for (int h = 1; h <= table.max_steps(); ++h) {
        const std::string prefix = src + std::to_string(h) + ",";
        for (const auto& e : table.step(h)) {
            block += prefix;
            block += csv_field(net_->label(e.target));
            block += ',';
            block += format_double(e.probability);
            block += '\n';
        }
    }
    put(block);
}

void TransitionDumpWriter::close()
{
    if (!file_) return;
    int rc = gzclose(as_gz(file_));
    file_ = nullptr;
    if (rc != Z_OK) throw std::runtime_error("transition dump: close failed");
}

TransitionDump read_transition_dump(const std::string& path, const StreetNetwork& net,
                                    int max_steps)
{
    gzFile in = gzopen(path.c_str(), "rb");
    if (!in) throw std::runtime_error("cannot open " + path);
    std::unique_ptr<gzFile_s, int (*)(gzFile)> guard(in, gzclose);

    TransitionDump dump;
    std::map<NodeId, TransitionTable> tables;
    std::array<char, 4096> buf{};
    std::string line;
    std::size_t line_no = 0;
    bool seen_columns = false;
    while (gzgets(in, buf.data(), static_cast<int>(buf.size())) != nullptr) {
        line += buf.data();
        if (line.empty() || (line.back() != '\n' && !gzeof(in))) continue;
        ++line_no;
        while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
        const std::string where = path + ":" + std::to_string(line_no) + ": ";
        if (line.empty()) {
        } else if (line.front() == '#') {
            std::istringstream words(line.substr(1));
            std::string word;
            while (words >> word) {
                auto eq = word.find('=');
                if (eq != std::string::npos) dump.header[word.substr(0, eq)] = word.substr(eq + 1);
            }
        } else if (!seen_columns) {
            if (line != "source,h,target,probability")
                throw std::runtime_error(where + "unexpected column header");
            seen_columns = true;
        } else {
            auto f = split_csv(line);
            if (f.size() != 4) throw std::runtime_error(where + "expected 4 fields");
            auto src = net.find(f[0]);
            auto dst = net.find(f[2]);
            if (!src || !dst) throw std::runtime_error(where + "unknown node id");
            auto h = parse_integer(f[1]);
            if (h < 1 || h > max_steps) throw std::runtime_error(where + "step out of range");
            auto& table = tables[*src];
            if (table.per_step.empty()) {
                table.source = *src;
                table.per_step.resize(static_cast<std::size_t>(max_steps));
            }
            auto& dist = table.per_step[static_cast<std::size_t>(h - 1)];
            if (!dist.empty() && dist.back().target >= *dst)
                throw std::runtime_error(where + "targets not in ascending order");
            dist.push_back({*dst, parse_double(f[3])});
        }
        line.clear();
    }
    if (auto it = dump.header.find("walks"); it != dump.header.end()) {
        auto walks = static_cast<std::uint32_t>(parse_integer(it->second));
        for (auto& [id, t] : tables) t.walks = walks;
    }
    for (auto& [id, t] : tables) dump.tables.push_back(std::move(t));
    return dump;
}

}  // namespace accesswalk
