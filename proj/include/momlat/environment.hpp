// SPDX-License-Identifier: Apache-2.0
//! \file momlat/environment.hpp
//! Lattice sites, unit-vector arrows and lazily sampled i.i.d. arrow fields.
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace momlat
{
//! Largest supported lattice dimension.
inline constexpr int kMaxDim = 4;

//---------------------------------------------------------------------------//
/*!
 * One of the 2d canonical unit vectors +-e_i.
 *
 * Encoded as code = 2 * axis + (sign < 0), with a zero-based axis, so that
 * negation flips the low bit.
 */
class Direction
{
  public:
    constexpr Direction() = default;
    static constexpr Direction from_code(int code)
    {
        Direction d;
        d.code_ = static_cast<std::uint8_t>(code);
        return d;
    }
    static constexpr Direction plus(int axis) { return from_code(2 * axis); }
    static constexpr Direction minus(int axis)
    {
        return from_code(2 * axis + 1);
    }

    constexpr int code() const { return code_; }
    constexpr int axis() const { return code_ >> 1; }
    constexpr int sign() const { return (code_ & 1) ? -1 : 1; }
    //! Component along `axis` (0 or +-1).
    constexpr int component(int axis) const
    {
        return axis == this->axis() ? sign() : 0;
    }
    constexpr Direction operator-() const { return from_code(code_ ^ 1); }

    friend constexpr bool operator==(Direction, Direction) = default;

  private:
    std::uint8_t code_ = 0;
};

//! Number of directions in dimension d.
constexpr int direction_count(int dim)
{
    return 2 * dim;
}

//---------------------------------------------------------------------------//
//! A point of Z^d; unused trailing coordinates stay zero.
struct Site
{
    std::array<std::int32_t, kMaxDim> x{};

    static Site origin() { return {}; }
    static Site along(Direction e)
    {
        Site s;
        s.x[e.axis()] = e.sign();
        return s;
    }

    Site& operator+=(Direction e)
    {
        x[e.axis()] += e.sign();
        return *this;
    }
    Site& operator-=(Direction e)
    {
        x[e.axis()] -= e.sign();
        return *this;
    }
    friend Site operator+(Site s, Direction e) { return s += e; }
    friend Site operator-(Site s, Direction e) { return s -= e; }
    friend Site operator+(Site const& a, Site const& b)
    {
        Site s;
        for (int i = 0; i < kMaxDim; ++i)
            s.x[i] = a.x[i] + b.x[i];
        return s;
    }
    friend Site operator-(Site const& a, Site const& b)
    {
        Site s;
        for (int i = 0; i < kMaxDim; ++i)
            s.x[i] = a.x[i] - b.x[i];
        return s;
    }
    bool is_origin() const { return *this == Site{}; }
    std::int64_t norm2() const
    {
        std::int64_t r = 0;
        for (auto c : x)
            r += std::int64_t{c} * c;
        return r;
    }

    friend bool operator==(Site const&, Site const&) = default;
};

//! Build a site from explicit coordinates (at most kMaxDim of them).
Site make_site(std::initializer_list<std::int32_t> coords);

//---------------------------------------------------------------------------//
/*!
 * Axis weights p of the drift-free measure mu_p(+-e_i) = p_i / 2.
 *
 * The sampling table is cumulative over the direction codes
 * (+e_1, -e_1, +e_2, -e_2, ...), so ties between equal weights resolve in
 * axis order.
 */
class MeasureP
{
  public:
    //! Throws std::invalid_argument unless p lies in the simplex (1e-12).
    explicit MeasureP(std::vector<double> p);

    static MeasureP isotropic(int dim);
    //! p = e_axis.
    static MeasureP totally_anisotropic(int dim, int axis = 0);

    int dimension() const { return static_cast<int>(p_.size()); }
    std::span<double const> weights() const { return p_; }
    double weight(int axis) const { return p_[axis]; }
    //! mu_p(e) = p_axis / 2.
    double probability(Direction e) const { return 0.5 * p_[e.axis()]; }

    //! Direction whose cumulative interval contains u in [0, 1).
    Direction pick(std::uint64_t bits) const;

    friend bool operator==(MeasureP const& a, MeasureP const& b)
    {
        return a.p_ == b.p_;
    }

  private:
    std::vector<double> p_;
    // Thresholds on 53-bit integers: direction k is chosen when
    // (bits >> 11) < cum_[k].
    std::array<std::uint64_t, 2 * kMaxDim> cum_{};
};

//---------------------------------------------------------------------------//
/*!
 * Open-addressing map from packed site keys to direction codes.
 *
 * Holds every site whose arrow has been written since construction.
 */
class SiteOverlay
{
  public:
    explicit SiteOverlay(int dim);

    //! Pointer to the stored code, or nullptr.
    std::uint8_t const* find(Site const& s) const;
    std::uint8_t* find(Site const& s);
    //! Stored code, inserting `fill` first when absent.
    std::uint8_t& slot(Site const& s, std::uint8_t fill);
    //! Slot for `s` and whether it was newly inserted (value then 0).
    std::pair<std::uint8_t*, bool> try_emplace(Site const& s);
    std::size_t size() const { return size_; }

    //! Visit (site, direction code) for every stored entry.
    template<class F>
    void for_each(F&& f) const
    {
        for (std::size_t i = 0; i < keys_.size(); ++i)
        {
            if (keys_[i] != kEmpty)
                f(unpack(keys_[i]), values_[i]);
        }
    }

  private:
    static constexpr std::uint64_t kEmpty = 0;

    std::uint64_t pack(Site const& s) const;
    Site unpack(std::uint64_t key) const;
    std::size_t probe(std::uint64_t key) const;
    void grow();

    int dim_;
    int bits_;
    std::size_t size_ = 0;
    std::vector<std::uint64_t> keys_;
    std::vector<std::uint8_t> values_;
};

//---------------------------------------------------------------------------//
/*!
 * Arrow at an unmodified site: a pure function of (seed, coordinates).
 *
 * h = seed; for each axis i < d: h = mix64(h ^ u32(x_i), i);
 * the direction is measure.pick(h).
 */
Direction base_arrow(std::uint64_t seed, MeasureP const& measure,
                     Site const& site);

//! Initial hand arrow of a field with the given seed.
Direction base_hand(std::uint64_t seed, MeasureP const& measure);

/*!
 * Lazily realized i.i.d. arrow configuration on Z^d with a write overlay.
 *
 * Forced entries are written into the overlay at construction, so two fields
 * sharing seed and measure differ exactly on their forced sites until the
 * dynamics touches anything else.
 */
class ArrowField
{
  public:
    using Forced = std::vector<std::pair<Site, Direction>>;

    ArrowField(std::uint64_t base_seed, MeasureP measure, Forced forced = {});

    int dimension() const { return measure_.dimension(); }
    std::uint64_t base_seed() const { return seed_; }
    MeasureP const& measure() const { return measure_; }
    Forced const& forced() const { return forced_; }
    SiteOverlay const& overrides() const { return overlay_; }

    //! Current arrow at `site` (overlay first, then the base sample).
    Direction at(Site const& site) const
    {
        if (auto const* code = overlay_.find(site))
            return Direction::from_code(*code);
        return base_arrow(seed_, measure_, site);
    }
    void set(Site const& site, Direction e)
    {
        overlay_.slot(site, 0) = static_cast<std::uint8_t>(e.code());
    }
    //! Overlay slot for `site`, materialized from the base sample if absent.
    std::uint8_t& slot(Site const& site)
    {
        auto [code, inserted] = overlay_.try_emplace(site);
        if (inserted)
            *code = static_cast<std::uint8_t>(
                base_arrow(seed_, measure_, site).code());
        return *code;
    }

  private:
    std::uint64_t seed_;
    MeasureP measure_;
    Forced forced_;
    SiteOverlay overlay_;
};

//! sample_arrow: the arrow currently stored at `site`.
inline Direction sample_arrow(ArrowField const& field, Site const& site)
{
    return field.at(site);
}

//---------------------------------------------------------------------------//
//! Walker position X_t, hand arrow, environment and clock.
struct WalkerState
{
    Site position;
    Direction hand;
    ArrowField field;
    double time = 0;
    std::uint64_t jump_count = 0;

    //! Walker at the origin holding the field's sampled hand arrow.
    static WalkerState start(ArrowField field);
    //! Same, with an explicitly chosen hand arrow.
    static WalkerState start(ArrowField field, Direction hand);

    int dimension() const { return field.dimension(); }
    Direction site_arrow() const { return field.at(position); }
};

//! Exchange the hand with the arrow at the walker's site.
inline void swap_hand_site(WalkerState& state)
{
    auto& code = state.field.slot(state.position);
    auto const site = static_cast<std::uint8_t>(code);
    code = static_cast<std::uint8_t>(state.hand.code());
    state.hand = Direction::from_code(site);
}

using Momentum = std::array<std::int64_t, kMaxDim>;

//! Componentwise arrow sum over `region`, plus the hand when requested.
Momentum region_momentum(WalkerState const& state,
                         std::span<Site const> region, bool include_hand);

//! Momentum over every site in the overlay plus the hand.
Momentum touched_momentum(WalkerState const& state);

}  // namespace momlat
