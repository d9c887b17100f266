public interface View {
}
