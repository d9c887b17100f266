public interface ViewFactory {
}
