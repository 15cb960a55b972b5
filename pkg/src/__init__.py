# grayforge: neutral cohomogeneity-one metrics on ruled surfaces
# Source code package
