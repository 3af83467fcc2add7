// SPDX-License-Identifier: Apache-2.0
#include "momlat/environment.hpp"

#include <cmath>
#include <string>

#include "momlat/rng.hpp"

namespace momlat
{
Site make_site(std::initializer_list<std::int32_t> coords)
{
    if (coords.size() > static_cast<std::size_t>(kMaxDim))
        throw std::invalid_argument("site has more than kMaxDim coordinates");
    Site s;
    std::size_t i = 0;
    for (auto c : coords)
        s.x[i++] = c;
    return s;
}

//---------------------------------------------------------------------------//
MeasureP::MeasureP(std::vector<double> p) : p_(std::move(p))
{
    if (p_.empty() || p_.size() > static_cast<std::size_t>(kMaxDim))
        throw std::invalid_argument("measure dimension must be in [1, "
                                    + std::to_string(kMaxDim) + "]");
    double total = 0;
    for (double w : p_)
    {
        if (!(w >= 0 && w <= 1))
            throw std::invalid_argument("axis weights must lie in [0, 1]");
        total += w;
    }
    if (std::abs(total - 1) > 1e-12)
        throw std::invalid_argument("axis weights must sum to 1");

    constexpr double scale = 0x1.0p53;
    double partial = 0;
    int const n = direction_count(dimension());
    for (int k = 0; k < n; ++k)
    {
        partial += 0.5 * p_[k / 2];
        cum_[k] = static_cast<std::uint64_t>(std::llround(partial * scale));
    }
    // The final threshold covers every 53-bit value; zero-weight tail
    // directions keep their (equal) thresholds and are never selected.
    for (int k = n - 1; k >= 0 && cum_[k] >= cum_[n - 1]; --k)
        cum_[k] = std::uint64_t{1} << 53;
}

MeasureP MeasureP::isotropic(int dim)
{
    return MeasureP(std::vector<double>(dim, 1.0 / dim));
}

MeasureP MeasureP::totally_anisotropic(int dim, int axis)
{
    std::vector<double> p(dim, 0.0);
    p.at(axis) = 1.0;
    return MeasureP(std::move(p));
}

Direction MeasureP::pick(std::uint64_t bits) const
{
    std::uint64_t const v = bits >> 11;
    int const n = direction_count(dimension());
    for (int k = 0; k < n - 1; ++k)
    {
        if (v < cum_[k])
            return Direction::from_code(k);
    }
    return Direction::from_code(n - 1);
}

//---------------------------------------------------------------------------//
SiteOverlay::SiteOverlay(int dim)
    : dim_(dim), bits_(64 / dim), keys_(64, kEmpty), values_(64, 0)
{
}

std::uint64_t SiteOverlay::pack(Site const& s) const
{
    // Offset-binary fields of `bits_` bits per axis; the all-zero key is
    // reserved, so the packed origin is shifted by one below.
    std::uint64_t key = 0;
    if (bits_ == 64)
    {
        key = static_cast<std::uint64_t>(static_cast<std::int64_t>(s.x[0]))
              ^ (std::uint64_t{1} << 63);
    }
    else
    {
        std::int64_t const half = std::int64_t{1} << (bits_ - 1);
        for (int i = 0; i < dim_; ++i)
        {
            std::int64_t const c = s.x[i];
            if (c <= -half || c >= half)
                throw std::out_of_range("site coordinate exceeds overlay range");
            key = (key << bits_) | static_cast<std::uint64_t>(c + half);
        }
    }
    return key + 1;
}

Site SiteOverlay::unpack(std::uint64_t key) const
{
    key -= 1;
    Site s;
    if (bits_ == 64)
    {
        s.x[0] = static_cast<std::int32_t>(
            static_cast<std::int64_t>(key ^ (std::uint64_t{1} << 63)));
        return s;
    }
    std::int64_t const half = std::int64_t{1} << (bits_ - 1);
    std::uint64_t const mask = (std::uint64_t{1} << bits_) - 1;
    for (int i = dim_ - 1; i >= 0; --i)
    {
        s.x[i] = static_cast<std::int32_t>(
            static_cast<std::int64_t>(key & mask) - half);
        key >>= bits_;
    }
    return s;
}

std::size_t SiteOverlay::probe(std::uint64_t key) const
{
    std::size_t const mask = keys_.size() - 1;
    std::size_t i = static_cast<std::size_t>(mix64(key)) & mask;
    while (keys_[i] != kEmpty && keys_[i] != key)
        i = (i + 1) & mask;
    return i;
}

std::uint8_t const* SiteOverlay::find(Site const& s) const
{
    std::size_t const i = probe(pack(s));
    return keys_[i] == kEmpty ? nullptr : &values_[i];
}

std::uint8_t* SiteOverlay::find(Site const& s)
{
    std::size_t const i = probe(pack(s));
    return keys_[i] == kEmpty ? nullptr : &values_[i];
}

std::pair<std::uint8_t*, bool> SiteOverlay::try_emplace(Site const& s)
{
    std::uint64_t const key = pack(s);
    std::size_t i = probe(key);
    if (keys_[i] == key)
        return {&values_[i], false};
    if (2 * (size_ + 1) > keys_.size())
    {
        grow();
        i = probe(key);
    }
    keys_[i] = key;
    values_[i] = 0;
    ++size_;
    return {&values_[i], true};
}

std::uint8_t& SiteOverlay::slot(Site const& s, std::uint8_t fill)
{
    auto [value, inserted] = try_emplace(s);
    if (inserted)
        *value = fill;
    return *value;
}

void SiteOverlay::grow()
{
    std::vector<std::uint64_t> old_keys(keys_.size() * 2, kEmpty);
    std::vector<std::uint8_t> old_values(values_.size() * 2, 0);
    old_keys.swap(keys_);
    old_values.swap(values_);
    for (std::size_t j = 0; j < old_keys.size(); ++j)
    {
        if (old_keys[j] == kEmpty)
            continue;
        std::size_t const i = probe(old_keys[j]);
        keys_[i] = old_keys[j];
        values_[i] = old_values[j];
    }
}

//---------------------------------------------------------------------------//
Direction base_arrow(std::uint64_t seed, MeasureP const& measure,
                     Site const& site)
{
    std::uint64_t h = seed;
    for (int i = 0; i < measure.dimension(); ++i)
        h = mix64(h ^ static_cast<std::uint32_t>(site.x[i]), i);
    return measure.pick(h);
}

Direction base_hand(std::uint64_t seed, MeasureP const& measure)
{
    // Counter value outside the range used by base_arrow's axis mixing.
    constexpr std::uint64_t kHandCounter = 0x68616e64ull;
    return measure.pick(mix64(seed ^ 0xffffffffffffffffull, kHandCounter));
}

ArrowField::ArrowField(std::uint64_t base_seed, MeasureP measure, Forced forced)
    : seed_(base_seed),
      measure_(std::move(measure)),
      forced_(std::move(forced)),
      overlay_(measure_.dimension())
{
    for (auto const& [site, dir] : forced_)
    {
        if (dir.axis() >= dimension())
            throw std::invalid_argument("forced arrow outside dimension");
        set(site, dir);
    }
}

//---------------------------------------------------------------------------//
WalkerState WalkerState::start(ArrowField field)
{
    Direction const hand = base_hand(field.base_seed(), field.measure());
    return start(std::move(field), hand);
}

WalkerState WalkerState::start(ArrowField field, Direction hand)
{
    return WalkerState{Site::origin(), hand, std::move(field), 0.0, 0};
}

Momentum region_momentum(WalkerState const& state,
                         std::span<Site const> region, bool include_hand)
{
    Momentum m{};
    for (auto const& s : region)
    {
        auto const e = state.field.at(s);
        m[e.axis()] += e.sign();
    }
    if (include_hand)
        m[state.hand.axis()] += state.hand.sign();
    return m;
}

Momentum touched_momentum(WalkerState const& state)
{
    Momentum m{};
    state.field.overrides().for_each([&](Site const&, std::uint8_t code) {
        auto const e = Direction::from_code(code);
        m[e.axis()] += e.sign();
    });
    m[state.hand.axis()] += state.hand.sign();
    return m;
}

}  // namespace momlat
