#include "gct/image_io.hpp"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>
#include <stdexcept>

namespace gct {

namespace {

Image from_mat(const cv::Mat& bgr) {
  Image img(bgr.cols, bgr.rows);
  for (int y = 0; y < bgr.rows; ++y) {
    const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      img.at(x, y, 0) = row[x][2] / 255.0f;
      img.at(x, y, 1) = row[x][1] / 255.0f;
      img.at(x, y, 2) = row[x][0] / 255.0f;
    }
  }
  return img;
}

cv::Mat to_mat(const Image& img) {
  cv::Mat bgr(img.height, img.width, CV_8UC3);
  for (int y = 0; y < img.height; ++y) {
    cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.width; ++x) {
      auto q = [&](int c) {
        const float v = img.at(x, y, c);
        return cv::saturate_cast<uchar>(v * 255.0f + 0.5f);
      };
      row[x] = cv::Vec3b(q(2), q(1), q(0));
    }
  }
  return bgr;
}

}  // namespace

Image load_image(const std::filesystem::path& file) {
  cv::Mat bgr = cv::imread(file.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw std::runtime_error("load_image: cannot read " + file.string());
  return from_mat(bgr);
}

void save_image(const std::filesystem::path& file, const Image& image) {
  if (!cv::imwrite(file.string(), to_mat(image)))
    throw std::runtime_error("save_image: cannot write " + file.string());
}

Image resize(const Image& image, int width, int height) {
  if (image.width == width && image.height == height) return image;
  cv::Mat src = to_mat(image);
  cv::Mat dst;
  cv::resize(src, dst, cv::Size(width, height), 0, 0, cv::INTER_LINEAR);
  return from_mat(dst);
}

}  // namespace gct
