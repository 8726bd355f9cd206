#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pramr {

enum class Modality : int { Camera = 0, Lidar = 1, Radar = 2 };

inline constexpr int kModalityCount = 3;

inline constexpr std::array<Modality, kModalityCount> kAllModalities = {
    Modality::Camera, Modality::Lidar, Modality::Radar};

constexpr int index_of(Modality m) { return static_cast<int>(m); }

constexpr Modality modality_at(int index) { return static_cast<Modality>(index); }

constexpr std::string_view name_of(Modality m) {
    switch (m) {
        case Modality::Camera: return "camera";
        case Modality::Lidar: return "lidar";
        case Modality::Radar: return "radar";
    }
    return "?";
}

std::optional<Modality> modality_from_name(std::string_view name);

// Small fixed-capacity set over the three modalities, stored as a bitmask.
class ModalitySet {
public:
    constexpr ModalitySet() = default;
    constexpr explicit ModalitySet(std::uint8_t bits) : bits_(bits & 0x7) {}

    static constexpr ModalitySet all() { return ModalitySet{0x7}; }
    static constexpr ModalitySet none() { return ModalitySet{}; }

    constexpr bool contains(Modality m) const { return bits_ & (1u << index_of(m)); }
    constexpr void insert(Modality m) { bits_ |= (1u << index_of(m)); }
    constexpr void erase(Modality m) { bits_ &= ~(1u << index_of(m)); }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr int size() const {
        int n = 0;
        for (auto m : kAllModalities) n += contains(m) ? 1 : 0;
        return n;
    }
    constexpr std::uint8_t bits() const { return bits_; }

    friend constexpr ModalitySet operator&(ModalitySet a, ModalitySet b) {
        return ModalitySet{static_cast<std::uint8_t>(a.bits_ & b.bits_)};
    }
    friend constexpr ModalitySet operator|(ModalitySet a, ModalitySet b) {
        return ModalitySet{static_cast<std::uint8_t>(a.bits_ | b.bits_)};
    }
    friend constexpr bool operator==(ModalitySet a, ModalitySet b) { return a.bits_ == b.bits_; }

private:
    std::uint8_t bits_ = 0;
};

std::string to_string(ModalitySet set);

// Per-modality scalar, indexed by Modality.
template <typename T>
using PerModality = std::array<T, kModalityCount>;

template <typename T>
constexpr T& at(PerModality<T>& v, Modality m) { return v[index_of(m)]; }

template <typename T>
constexpr const T& at(const PerModality<T>& v, Modality m) { return v[index_of(m)]; }

}  // namespace pramr
