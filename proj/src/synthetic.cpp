#include "pfc/synthetic.hpp"

#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace pfc {

namespace {

// uniform draw from [0, n) by rejection; mt19937_64 output is standardized,
// so results are identical across implementations
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold) return r % n;
    }
}

// uniform double in [0, 1) with 53 random bits
double canonical(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::int32_t hamming(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
    std::int32_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

} // namespace

void SyntheticSpec::validate() const {
    if (n_classes < 1) throw std::invalid_argument("n_classes must be >= 1");
    if (copies_per_class < 1) throw std::invalid_argument("copies_per_class must be >= 1");
    if (n_attributes < 1) throw std::invalid_argument("n_attributes must be >= 1");
    if (values_per_attribute < 2)
        throw std::invalid_argument("values_per_attribute must be >= 2");
    if (!(noise_rate >= 0.0 && noise_rate < 1.0))
        throw std::invalid_argument("noise_rate must lie in [0, 1)");
    if (distance() > n_attributes)
        throw std::invalid_argument("min_prototype_distance exceeds the attribute count");
}

SyntheticData generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    spec.validate();
    std::mt19937_64 rng(seed);

    // prototypes with pairwise Hamming distance >= spec.distance()
    std::vector<std::vector<std::int32_t>> prototypes;
    for (std::int32_t c = 0; c < spec.n_classes; ++c) {
        bool placed = false;
        for (std::int32_t attempt = 0; attempt < 10000 && !placed; ++attempt) {
            std::vector<std::int32_t> proto(spec.n_attributes);
            for (std::int32_t a = 0; a < spec.n_attributes; ++a)
                proto[a] = static_cast<std::int32_t>(
                    bounded(rng, static_cast<std::uint64_t>(spec.values_per_attribute)));
            bool far = true;
            for (const auto& other : prototypes)
                if (hamming(proto, other) < spec.distance()) {
                    far = false;
                    break;
                }
            if (far) {
                prototypes.push_back(std::move(proto));
                placed = true;
            }
        }
        if (!placed)
            throw std::runtime_error(
                "could not place prototypes at the requested pairwise distance");
    }

    // class-major rows, then one shuffle over the whole collection
    const std::int64_t n = static_cast<std::int64_t>(spec.n_classes) * spec.copies_per_class;
    std::vector<std::vector<std::int32_t>> cells(n);
    std::vector<std::int32_t> labels(n);
    std::int64_t noisy = 0;
    std::int64_t idx = 0;
    for (std::int32_t c = 0; c < spec.n_classes; ++c) {
        for (std::int32_t copy = 0; copy < spec.copies_per_class; ++copy, ++idx) {
            labels[idx] = c;
            cells[idx] = prototypes[c];
            if (spec.noise_rate > 0.0) {
                for (std::int32_t a = 0; a < spec.n_attributes; ++a) {
                    if (canonical(rng) >= spec.noise_rate) continue;
                    cells[idx][a] = static_cast<std::int32_t>(bounded(
                        rng, static_cast<std::uint64_t>(spec.values_per_attribute)));
                    if (cells[idx][a] != prototypes[c][a]) ++noisy;
                }
            }
        }
    }

    for (std::int64_t i = n - 1; i > 0; --i) {  // Fisher-Yates
        const std::int64_t j =
            static_cast<std::int64_t>(bounded(rng, static_cast<std::uint64_t>(i + 1)));
        std::swap(cells[i], cells[j]);
        std::swap(labels[i], labels[j]);
    }

    Schema schema;
    for (std::int32_t a = 0; a < spec.n_attributes; ++a) {
        AttributeSpec attr;
        attr.name = "a" + std::to_string(a + 1);
        attr.encoding = Encoding::OneHot;
        for (std::int32_t v = 0; v < spec.values_per_attribute; ++v)
            attr.values.push_back("v" + std::to_string(v));
        schema.attributes.push_back(std::move(attr));
    }

    std::vector<RawRow> rows(n);
    const int width = static_cast<int>(std::to_string(n).size());
    for (std::int64_t i = 0; i < n; ++i) {
        std::string num = std::to_string(i + 1);
        rows[i].name = "obj_" + std::string(width - static_cast<int>(num.size()), '0') + num;
        for (std::int32_t a = 0; a < spec.n_attributes; ++a)
            rows[i].cells.push_back("v" + std::to_string(cells[i][a]));
    }

    SyntheticData data{build_context(schema, rows), std::move(labels), std::move(prototypes),
                       noisy};
    return data;
}

} // namespace pfc
