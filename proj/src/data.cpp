#include "qcorr/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qcorr/bbqc.hpp"
#include "qcorr/hmm.hpp"

namespace qcorr::data {

namespace {

[[noreturn]] void reject(const std::string& path, std::size_t line, const std::string& why) {
    throw std::invalid_argument(path + ":" + std::to_string(line) + ": " + why);
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(field);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

int parse_int(const std::string& text, const std::string& path, std::size_t line) {
    const std::string t = trim(text);
    if (t.empty()) reject(path, line, "empty field");
    std::size_t used = 0;
    int value = 0;
    try {
        value = std::stoi(t, &used);
    } catch (const std::exception&) {
        reject(path, line, "not an integer: '" + t + "'");
    }
    if (used != t.size()) reject(path, line, "trailing characters after integer: '" + t + "'");
    return value;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

Dataset load_generic_csv(const std::string& path) {
    Dataset d;
    d.name = path;
    d.provenance = "generic-csv: " + path;
    int header_m = -1, header_n = -1;

    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string line = trim(lines[i]);
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("# provenance:", 0) == 0) continue;  // free-form comment
            std::istringstream hdr(line.substr(1));
            std::string token;
            while (hdr >> token) {
                if (token.rfind("M=", 0) == 0) header_m = parse_int(token.substr(2), path, i + 1);
                if (token.rfind("n=", 0) == 0) header_n = parse_int(token.substr(2), path, i + 1);
            }
            continue;
        }
        std::vector<int> seq;
        for (const auto& f : split_fields(line, ',')) seq.push_back(parse_int(f, path, i + 1));
        if (seq.empty()) reject(path, i + 1, "empty sequence");
        d.sequences.push_back(std::move(seq));
    }
    if (d.sequences.empty()) throw std::invalid_argument(path + ": no sequences");

    d.n = header_n > 0 ? header_n : static_cast<int>(d.sequences[0].size());
    int max_sym = 0;
    for (std::size_t i = 0; i < d.sequences.size(); ++i) {
        if (static_cast<int>(d.sequences[i].size()) != d.n) {
            reject(path, 0, "ragged rows: expected length " + std::to_string(d.n));
        }
        for (int s : d.sequences[i]) {
            if (s < 0) reject(path, 0, "negative symbol");
            max_sym = std::max(max_sym, s);
        }
    }
    d.M = header_m > 0 ? header_m : max_sym + 1;
    d.validate();
    return d;
}

Dataset load_columns(const std::string& path, int columns, int alphabet, char sep,
                     const std::string& tag) {
    Dataset d;
    d.name = path;
    d.M = alphabet;
    d.n = columns;
    d.provenance = tag + ": " + path;
    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string line = trim(lines[i]);
        if (line.empty()) continue;
        auto fields = split_fields(line, sep);
        if (sep == ',' && fields.size() == 1) fields = split_fields(line, ' ');
        std::vector<int> seq;
        for (const auto& f : fields) {
            const std::string t = trim(f);
            if (t.empty()) continue;
            seq.push_back(parse_int(t, path, i + 1));
        }
        if (static_cast<int>(seq.size()) != columns) {
            reject(path, i + 1, "expected " + std::to_string(columns) + " columns, got " +
                                    std::to_string(seq.size()));
        }
        for (int s : seq) {
            if (s < 0 || s >= alphabet) reject(path, i + 1, "symbol out of range");
        }
        d.sequences.push_back(std::move(seq));
    }
    if (d.sequences.empty()) throw std::invalid_argument(path + ": no sequences");
    d.validate();
    return d;
}

Dataset load_promoter(const std::string& path) {
    Dataset d;
    d.name = path;
    d.M = 4;
    d.n = 57;
    d.provenance = "promoter: " + path;
    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string line = trim(lines[i]);
        if (line.empty()) continue;
        const auto fields = split_fields(line, ',');
        if (fields.size() != 3) reject(path, i + 1, "expected 'class,name,sequence'");
        std::string body;
        for (char c : fields[2]) {
            if (c == ' ' || c == '\t') continue;
            body.push_back(c);
        }
        if (body.size() != 57) {
            reject(path, i + 1, "expected 57 nucleotides, got " + std::to_string(body.size()));
        }
        std::vector<int> seq;
        seq.reserve(57);
        for (char c : body) {
            switch (c) {
                case 'a': case 'A': seq.push_back(0); break;
                case 'c': case 'C': seq.push_back(1); break;
                case 'g': case 'G': seq.push_back(2); break;
                case 't': case 'T': seq.push_back(3); break;
                default: reject(path, i + 1, std::string("unknown nucleotide '") + c + "'");
            }
        }
        d.sequences.push_back(std::move(seq));
    }
    if (d.sequences.empty()) throw std::invalid_argument(path + ": no sequences");
    d.validate();
    return d;
}

}  // namespace

Format parse_format(const std::string& name) {
    if (name == "generic-csv" || name == "csv") return Format::GenericCsv;
    if (name == "biofam") return Format::Biofam;
    if (name == "spect") return Format::Spect;
    if (name == "promoter") return Format::Promoter;
    throw std::invalid_argument("unknown dataset format: " + name);
}

void Dataset::validate() const {
    if (M <= 0 || n <= 0) throw std::invalid_argument("Dataset: M and n must be positive");
    for (const auto& seq : sequences) {
        if (static_cast<int>(seq.size()) != n) throw std::invalid_argument("Dataset: ragged sequence");
        for (int s : seq) {
            if (s < 0 || s >= M) throw std::invalid_argument("Dataset: symbol out of range");
        }
    }
}

Dataset load_sequences(const std::string& path, Format format) {
    switch (format) {
        case Format::GenericCsv: return load_generic_csv(path);
        case Format::Biofam: return load_columns(path, 16, 8, ',', "biofam");
        case Format::Spect: return load_columns(path, 23, 2, ',', "spect");
        case Format::Promoter: return load_promoter(path);
    }
    throw std::invalid_argument("load_sequences: bad format");
}

void save_generic_csv(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << "# M=" << dataset.M << " n=" << dataset.n << "\n";
    if (!dataset.provenance.empty()) out << "# provenance: " << dataset.provenance << "\n";
    for (const auto& seq : dataset.sequences) {
        for (std::size_t i = 0; i < seq.size(); ++i) {
            if (i) out << ',';
            out << seq[i];
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, double holdout_fraction,
                                  std::uint64_t seed) {
    if (dataset.sequences.empty()) throw std::invalid_argument("split: empty dataset");
    if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
        throw std::invalid_argument("split: fraction must lie in (0, 1)");
    }
    const std::size_t count = dataset.sequences.size();
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    RandomSource rng(seed);
    for (std::size_t i = count; i > 1; --i) {
        std::swap(order[i - 1], order[rng.uniform_index(i)]);
    }
    std::size_t test_count = static_cast<std::size_t>(std::llround(holdout_fraction * count));
    test_count = std::clamp<std::size_t>(test_count, 1, count - 1);

    Dataset train = dataset;
    Dataset test = dataset;
    train.sequences.clear();
    test.sequences.clear();
    train.provenance = dataset.provenance + " [train split]";
    test.provenance = dataset.provenance + " [test split]";
    for (std::size_t i = 0; i < count; ++i) {
        (i < test_count ? test : train).sequences.push_back(dataset.sequences[order[i]]);
    }
    return {train, test};
}

std::vector<std::vector<std::size_t>> minibatch_indices(std::size_t count, std::size_t batch_size,
                                                        std::uint64_t seed, std::uint64_t epoch) {
    if (batch_size == 0) throw std::invalid_argument("minibatch_indices: batch size must be >= 1");
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    RandomSource rng(RandomSource::mix(seed, epoch));
    for (std::size_t i = count; i > 1; --i) {
        std::swap(order[i - 1], order[rng.uniform_index(i)]);
    }
    std::vector<std::vector<std::size_t>> batches;
    for (std::size_t start = 0; start < count; start += batch_size) {
        const std::size_t end = std::min(count, start + batch_size);
        batches.emplace_back(order.begin() + start, order.begin() + end);
    }
    return batches;
}

std::vector<Dataset> minibatches(const Dataset& dataset, std::size_t batch_size,
                                 std::uint64_t seed, std::uint64_t epoch) {
    std::vector<Dataset> out;
    for (const auto& batch : minibatch_indices(dataset.sequences.size(), batch_size, seed, epoch)) {
        Dataset b = dataset;
        b.sequences.clear();
        for (std::size_t idx : batch) b.sequences.push_back(dataset.sequences[idx]);
        out.push_back(std::move(b));
    }
    return out;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

Dataset synth_from_model(const hmm::Hmm& generator, std::size_t count, int n, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("synth_from_model: count must be >= 1");
    Dataset d;
    d.name = "synthetic-hmm";
    d.M = generator.M;
    d.n = n;
    d.provenance = "synthetic hmm h=" + std::to_string(generator.h) +
                   " checkpoint=" + std::to_string(fnv1a(generator.to_json())) +
                   " seed=" + std::to_string(seed);
    RandomSource rng(seed);
    d.sequences.reserve(count);
    for (std::size_t i = 0; i < count; ++i) d.sequences.push_back(sample_hmm(generator, n, rng));
    return d;
}

Dataset synth_from_model(const bbqc::BbqcModel& generator, std::size_t count, int n,
                         std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("synth_from_model: count must be >= 1");
    Dataset d;
    d.name = "synthetic-bbqc";
    d.M = generator.M;
    d.n = n;
    d.provenance = "synthetic bbqc k=" + std::to_string(generator.k) +
                   " checkpoint=" + std::to_string(fnv1a(generator.to_json())) +
                   " seed=" + std::to_string(seed);
    RandomSource rng(seed);
    d.sequences.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        d.sequences.push_back(bbqc::sample_bbqc(generator, n, rng));
    }
    return d;
}

}  // namespace qcorr::data
