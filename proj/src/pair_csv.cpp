#include "trunctail/pair_csv.hpp"

#include <vector>

#include "trunctail/errors.hpp"
#include "trunctail/text.hpp"

namespace trunctail {

TruncatedSample read_pairs_csv(std::string_view input) {
    std::vector<ObservedPair> pairs;
    std::size_t line_no = 0;
    bool header = true;
    for (auto raw : text::split(input, '\n')) {
        ++line_no;
        const auto line = text::trim(raw);
        if (line.empty()) continue;
        if (header) {
            const auto f = text::split(line, ',');
            if (f.size() != 2 || text::trim(f[0]) != "x" || text::trim(f[1]) != "y")
                throw InputError("line " + std::to_string(line_no) + ": expected header 'x,y'", line_no);
            header = false;
            continue;
        }
        const auto f = text::split(line, ',');
        if (f.size() != 2)
            throw InputError("line " + std::to_string(line_no) + ": expected 2 fields, got " +
                                 std::to_string(f.size()),
                             line_no);
        const auto x = text::parse_double(f[0]);
        const auto y = text::parse_double(f[1]);
        if (!x || !y)
            throw InputError("line " + std::to_string(line_no) + ": values must be finite decimals", line_no);
        if (!(*x > 0.0) || !(*y > 0.0))
            throw InputError("line " + std::to_string(line_no) + ": values must be positive", line_no);
        if (*x > *y)
            throw InputError("line " + std::to_string(line_no) + ": x > y (" + std::string(text::trim(f[0])) +
                                 " > " + std::string(text::trim(f[1])) + ")",
                             line_no);
        pairs.push_back({*x, *y});
    }
    if (header) throw InputError("missing header 'x,y'");
    if (pairs.empty()) throw InputError("no data rows");
    return TruncatedSample(std::move(pairs));
}

std::string write_pairs_csv(const TruncatedSample& sample) {
    std::string out = "x,y\n";
    for (const auto& p : sample.pairs()) {
        out += text::exact(p.x);
        out += ',';
        out += text::exact(p.y);
        out += '\n';
    }
    return out;
}

}  // namespace trunctail
